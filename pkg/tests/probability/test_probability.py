import logging

import numpy as np
import pytest

from rd_exponent import (
    DistortionTable,
    JointPmf,
    SourcePmf,
    conditional_x_given_y,
    expected_distortion,
    kl_divergence,
    marginals,
    mutual_information,
    validate_problem,
)
from rd_exponent.exceptions import (
    DimensionMismatchError,
    InvalidDistortionError,
    InvalidDistributionError,
    InvalidProblemError,
)


def test_valid_problem_is_built(uniform_hamming):
    assert uniform_hamming.shape == (2, 2)
    assert uniform_hamming.zero_row_property
    assert uniform_hamming.distortion.d_max == 1.0
    assert uniform_hamming.labels_x is None


def test_labels_are_kept():
    problem = validate_problem([0.5, 0.5], [[0, 1], [1, 0]], ["a", "b"], ["A", "B"])
    assert problem.labels_x == ("a", "b")
    assert problem.labels_y == ("A", "B")


@pytest.mark.parametrize(
    ["source", "distortion", "error"],
    [
        ([0.5, 0.5], [[0, 1], [1, 0], [1, 1]], DimensionMismatchError),
        ([0.5, 0.5], [0, 1], DimensionMismatchError),
        ([], [[0, 1]], DimensionMismatchError),
        ([0.6, 0.6], [[0, 1], [1, 0]], InvalidDistributionError),
        ([1.2, -0.2], [[0, 1], [1, 0]], InvalidDistributionError),
        ([np.nan, 1.0], [[0, 1], [1, 0]], InvalidDistributionError),
        ([0.5, 0.5], [[0, -1], [1, 0]], InvalidDistortionError),
        ([0.5, 0.5], [[0, np.inf], [1, 0]], InvalidDistortionError),
    ],
)
def test_invalid_problem_raises_exception(source, distortion, error):
    with pytest.raises(error):
        validate_problem(source, distortion)


def test_invalid_problem_errors_share_a_base_class():
    with pytest.raises(InvalidProblemError):
        validate_problem([0.6, 0.6], [[0, 1], [1, 0]])


def test_label_length_is_checked():
    with pytest.raises(DimensionMismatchError):
        validate_problem([0.5, 0.5], [[0, 1], [1, 0]], labels_x=["only one"])


def test_negative_distortion_error_names_the_cell():
    with pytest.raises(InvalidDistortionError, match=r"\(1, 0\)"):
        validate_problem([0.5, 0.5], [[0, 1], [-2, 0]])


def test_sum_is_checked_within_tolerance():
    SourcePmf(probs=[0.5, 0.5 + 1e-13])
    with pytest.raises(InvalidDistributionError):
        SourcePmf(probs=[0.5, 0.5 + 1e-9])


def test_missing_zero_row_is_a_warning(caplog):
    with caplog.at_level(logging.WARNING):
        problem = validate_problem([0.5, 0.5], [[0.2, 1], [1, 0]])
    assert not problem.zero_row_property
    assert "without zero entries" in caplog.text


def test_arrays_are_read_only(uniform_hamming):
    with pytest.raises(ValueError):
        uniform_hamming.source.probs[0] = 1.0


def test_marginals():
    q_x, q_y = marginals(JointPmf(probs=[[0.2, 0.1], [0.3, 0.4]]))
    assert q_x == pytest.approx([0.3, 0.7])
    assert q_y == pytest.approx([0.5, 0.5])


def test_conditional_marks_undefined_columns():
    conditional = conditional_x_given_y(JointPmf(probs=[[0.25, 0.0], [0.75, 0.0]]))
    assert conditional.defined.tolist() == [True, False]
    assert conditional.table[:, 0] == pytest.approx([0.25, 0.75])
    assert np.all(np.isnan(conditional.table[:, 1]))


def test_conditional_columns_sum_to_one(rng, make_joint):
    conditional = conditional_x_given_y(make_joint(rng, 3, 4))
    assert conditional.table.sum(axis=0) == pytest.approx(np.ones(4))


def test_kl_divergence():
    assert kl_divergence([0.5, 0.5], [0.5, 0.5]) == 0.0
    assert kl_divergence([1.0, 0.0], [0.5, 0.5]) == pytest.approx(np.log(2))
    assert kl_divergence([0.5, 0.5], [1.0, 0.0]) == np.inf


def test_kl_divergence_shape_mismatch():
    with pytest.raises(DimensionMismatchError):
        kl_divergence([0.5, 0.5], [0.2, 0.3, 0.5])


def test_mutual_information():
    value = mutual_information(JointPmf(probs=[[0.2, 0.1], [0.3, 0.4]]))
    assert value == pytest.approx(0.0241573, abs=1e-6)


def test_mutual_information_of_product_is_zero():
    table = np.outer([0.3, 0.7], [0.1, 0.6, 0.3])
    assert mutual_information(table) == pytest.approx(0.0, abs=1e-15)
    assert mutual_information(table) >= 0.0


def test_mutual_information_is_bounded_by_entropies(rng, make_joint):
    for _ in range(20):
        q = make_joint(rng, 3, 2)
        q_x, q_y = marginals(q)
        entropy_x = -np.sum(q_x * np.log(q_x))
        entropy_y = -np.sum(q_y * np.log(q_y))
        assert 0.0 <= mutual_information(q) <= min(entropy_x, entropy_y) + 1e-12


def test_expected_distortion(uniform_hamming):
    q = JointPmf(probs=[[0.4, 0.1], [0.05, 0.45]])
    assert expected_distortion(q, uniform_hamming.distortion) == pytest.approx(0.15)


def test_expected_distortion_shape_mismatch():
    with pytest.raises(DimensionMismatchError):
        expected_distortion(
            JointPmf(probs=[[0.5, 0.5]]), DistortionTable(d=[[0, 1], [1, 0]])
        )
