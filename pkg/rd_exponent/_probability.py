#  Copyright (c) 2024 Federico Busetti <729029+febus982@users.noreply.github.com>
#
#  Permission is hereby granted, free of charge, to any person obtaining a
#  copy of this software and associated documentation files (the "Software"),
#  to deal in the Software without restriction, including without limitation
#  the rights to use, copy, modify, merge, publish, distribute, sublicense,
#  and/or sell copies of the Software, and to permit persons to whom the
#  Software is furnished to do so, subject to the following conditions:
#
#  The above copyright notice and this permission notice shall be included in
#  all copies or substantial portions of the Software.
#
#  THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
#  IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
#  FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL
#  THE AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
#  LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING
#  FROM, OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER
#  DEALINGS IN THE SOFTWARE.

import logging
from functools import cached_property
from typing import Any, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator
from scipy.special import rel_entr

from rd_exponent.exceptions import (
    DimensionMismatchError,
    InvalidDistortionError,
    InvalidDistributionError,
)

logger = logging.getLogger(__name__)

PROBABILITY_TOLERANCE = 1e-12


def _as_float_array(value: Any, ndim: int, name: str) -> np.ndarray:
    """Copies the supplied value into a read-only float array.

    :param value: A nested sequence or an array
    :param ndim: The required number of dimensions
    :param name: Field name used in error messages
    :return: A read-only copy of the data
    :raises DimensionMismatchError: The value has the wrong shape or is empty
    """
    try:
        array = np.array(value, dtype=float)
    except (TypeError, ValueError):
        raise DimensionMismatchError(f"`{name}` is not a numeric array of rank {ndim}")
    if array.ndim != ndim or array.size == 0:
        raise DimensionMismatchError(
            f"`{name}` must be a non-empty array of rank {ndim},"
            f" got shape {array.shape}"
        )
    array.setflags(write=False)
    return array


def _check_distribution(array: np.ndarray, name: str) -> None:
    if not np.all(np.isfinite(array)):
        raise InvalidDistributionError(f"`{name}` contains non finite entries")
    negative = np.argwhere(array < 0)
    if negative.size:
        cell = tuple(int(i) for i in negative[0])
        raise InvalidDistributionError(
            f"`{name}` has a negative probability at {cell}: {array[cell]!r}"
        )
    total = float(array.sum())
    if abs(total - 1.0) > PROBABILITY_TOLERANCE:
        raise InvalidDistributionError(
            f"`{name}` is not a distribution: entries sum to {total!r}"
        )


class SourcePmf(BaseModel):
    """
    A probability vector over the source alphabet.

    :param probs: The probability of each source symbol
    :type probs: np.ndarray
    """

    probs: np.ndarray

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @field_validator("probs", mode="before")
    @classmethod
    def _validate_probs(cls, value: Any) -> np.ndarray:
        array = _as_float_array(value, 1, "source")
        _check_distribution(array, "source")
        return array

    @property
    def size(self) -> int:
        return int(self.probs.shape[0])

    @property
    def support(self) -> np.ndarray:
        return self.probs > 0


class JointPmf(BaseModel):
    """
    A joint probability table over the source and reproduction alphabets.

    :param probs: Table of shape `(|X|, |Y|)`
    :type probs: np.ndarray
    """

    probs: np.ndarray

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @field_validator("probs", mode="before")
    @classmethod
    def _validate_probs(cls, value: Any) -> np.ndarray:
        array = _as_float_array(value, 2, "joint distribution")
        _check_distribution(array, "joint distribution")
        return array

    @property
    def shape(self) -> Tuple[int, int]:
        return self.probs.shape  # type: ignore[return-value]

    @property
    def is_strictly_positive(self) -> bool:
        return bool(np.all(self.probs > 0))


class ConditionalTable(BaseModel):
    """
    A conditional distribution `q(x|y)` stored column-wise.

    Columns of an output symbol with zero marginal probability are undefined:
    they are filled with NaN and flagged False in `defined`.

    :param table: Table of shape `(|X|, |Y|)`
    :type table: np.ndarray
    :param defined: Boolean flag for each column
    :type defined: np.ndarray
    """

    table: np.ndarray
    defined: np.ndarray

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)


class DistortionTable(BaseModel):
    """
    A nonnegative distortion measure `d(x, y)`.

    :param d: Table of shape `(|X|, |Y|)`
    :type d: np.ndarray
    """

    d: np.ndarray

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @field_validator("d", mode="before")
    @classmethod
    def _validate_d(cls, value: Any) -> np.ndarray:
        array = _as_float_array(value, 2, "distortion")
        if not np.all(np.isfinite(array)):
            raise InvalidDistortionError("`distortion` contains non finite entries")
        negative = np.argwhere(array < 0)
        if negative.size:
            x, y = (int(i) for i in negative[0])
            raise InvalidDistortionError(
                f"`distortion` has a negative value at cell ({x}, {y}):"
                f" {array[x, y]!r}"
            )
        return array

    @cached_property
    def d_max(self) -> float:
        return float(self.d.max())

    @property
    def zero_row_property(self) -> bool:
        """True when every source symbol has a zero-distortion reproduction."""
        return bool(np.all(np.any(self.d == 0, axis=1)))


class Problem(BaseModel):
    """
    A lossy source coding problem: a source distribution and a distortion
    measure, with optional labels for the two alphabets.
    """

    source: SourcePmf
    distortion: DistortionTable
    labels_x: Union[Tuple[str, ...], None] = None
    labels_y: Union[Tuple[str, ...], None] = None

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check_dimensions(self) -> "Problem":
        rows, columns = self.distortion.d.shape
        if self.source.size != rows:
            raise DimensionMismatchError(
                f"Source has {self.source.size} symbols"
                f" but the distortion table has {rows} rows"
            )
        if self.labels_x is not None and len(self.labels_x) != rows:
            raise DimensionMismatchError(
                f"`labels_x` has {len(self.labels_x)} entries, expected {rows}"
            )
        if self.labels_y is not None and len(self.labels_y) != columns:
            raise DimensionMismatchError(
                f"`labels_y` has {len(self.labels_y)} entries, expected {columns}"
            )
        return self

    @property
    def shape(self) -> Tuple[int, int]:
        return self.distortion.d.shape  # type: ignore[return-value]

    @property
    def zero_row_property(self) -> bool:
        return self.distortion.zero_row_property


def validate_problem(
    source: Union[SourcePmf, Sequence[float], np.ndarray],
    distortion: Union[DistortionTable, Sequence[Sequence[float]], np.ndarray],
    labels_x: Union[Sequence[str], None] = None,
    labels_y: Union[Sequence[str], None] = None,
) -> Problem:
    """Builds and validates a problem.

    A missing zero-row property is reported as a warning only: the iterative
    solver runs without it, the identity `Omega(mu, 0) = 0` does not hold.

    :param source: The source distribution P
    :param distortion: The distortion table d(x, y)
    :param labels_x: Optional source symbol labels
    :param labels_y: Optional reproduction symbol labels
    :return: The validated problem
    :raises InvalidProblemError: Any of the shape or value checks failed
    """
    if not isinstance(source, SourcePmf):
        source = SourcePmf(probs=source)
    if not isinstance(distortion, DistortionTable):
        distortion = DistortionTable(d=distortion)
    problem = Problem(
        source=source,
        distortion=distortion,
        labels_x=tuple(labels_x) if labels_x is not None else None,
        labels_y=tuple(labels_y) if labels_y is not None else None,
    )
    if not problem.zero_row_property:
        logger.warning(
            "Distortion table has a row without zero entries:"
            " Omega(mu, 0) = 0 does not hold for this problem"
        )
    return problem


JointLike = Union[JointPmf, np.ndarray]


def _joint(q: JointLike) -> np.ndarray:
    return q.probs if isinstance(q, JointPmf) else np.asarray(q, dtype=float)


PmfLike = Union[SourcePmf, JointPmf, Sequence[float], np.ndarray]


def _array(p: PmfLike) -> np.ndarray:
    if isinstance(p, (SourcePmf, JointPmf)):
        return p.probs
    return np.asarray(p, dtype=float)


def marginals(q: JointLike) -> Tuple[np.ndarray, np.ndarray]:
    """Returns the marginals `(q_X, q_Y)` of a joint distribution."""
    table = _joint(q)
    return table.sum(axis=1), table.sum(axis=0)


def conditional_x_given_y(q: JointLike) -> ConditionalTable:
    """Computes `q(x|y) = q(x, y) / q_Y(y)` column by column.

    :param q: A joint distribution
    :return: The conditional table, NaN on columns where `q_Y(y) = 0`
    """
    table = _joint(q)
    q_y = table.sum(axis=0)
    defined = q_y > 0
    conditional = np.full(table.shape, np.nan)
    conditional[:, defined] = table[:, defined] / q_y[defined]
    return ConditionalTable(table=conditional, defined=defined)


def kl_divergence(p: PmfLike, q: PmfLike) -> float:
    """Relative entropy `D(p||q)` in nats.

    Terms with `p = 0` contribute 0, the result is `+inf` when `p` puts mass
    where `q` has none.
    """
    p_array = _array(p)
    q_array = _array(q)
    if p_array.shape != q_array.shape:
        raise DimensionMismatchError(
            f"Cannot compare distributions of shape {p_array.shape}"
            f" and {q_array.shape}"
        )
    return max(float(np.sum(rel_entr(p_array, q_array))), 0.0)


def mutual_information(q: JointLike) -> float:
    """Mutual information `I(q_X, q_{Y|X})` of a joint distribution, in nats."""
    table = _joint(q)
    q_x, q_y = marginals(table)
    return max(float(np.sum(rel_entr(table, np.outer(q_x, q_y)))), 0.0)


def expected_distortion(q: JointLike, distortion: DistortionTable) -> float:
    """Average distortion `E_q[d(X, Y)]`."""
    table = _joint(q)
    if table.shape != distortion.d.shape:
        raise DimensionMismatchError(
            f"Joint distribution of shape {table.shape} does not match"
            f" a distortion table of shape {distortion.d.shape}"
        )
    return float(np.sum(table * distortion.d))
