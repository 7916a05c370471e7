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

from .grid import (
    COARSE_MARGINAL_STEP,
    DEFAULT_JOINT_STEP,
    DEFAULT_MARGINAL_STEP,
    MAX_SOURCE_GRID_POINTS,
    GridSpec,
    default_marginal_step,
    grid_gck,
    grid_joint_g,
    grid_omega,
)
from .rate_distortion import (
    analytic_binary_hamming_rd,
    ba_rate_distortion,
    binary_entropy,
    is_binary_hamming,
)

__all__ = [
    "COARSE_MARGINAL_STEP",
    "DEFAULT_JOINT_STEP",
    "DEFAULT_MARGINAL_STEP",
    "GridSpec",
    "MAX_SOURCE_GRID_POINTS",
    "analytic_binary_hamming_rd",
    "ba_rate_distortion",
    "binary_entropy",
    "default_marginal_step",
    "grid_gck",
    "grid_joint_g",
    "grid_omega",
    "is_binary_hamming",
]
