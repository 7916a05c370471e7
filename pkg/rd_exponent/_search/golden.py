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

import math
from typing import Callable

from pydantic import BaseModel

INV_PHI = (math.sqrt(5) - 1) / 2


class GoldenSearchResult(BaseModel):
    """
    The outcome of a golden-section search.

    :param argmax: The maximizer found
    :type argmax: float
    :param maximum: The objective value at `argmax`
    :type maximum: float
    :param evaluations: Number of objective evaluations
    :type evaluations: int
    """

    argmax: float
    maximum: float
    evaluations: int


def golden_section_maximize(
    objective: Callable[[float, float], float],
    lower: float,
    upper: float,
    tol: float,
) -> GoldenSearchResult:
    """Maximizes a concave function of one variable over `[lower, upper]`.

    The objective receives the point and the current bracket width, so that
    it can be evaluated more accurately as the bracket shrinks. Both ends of
    the interval are evaluated as well: a maximizer on the boundary is
    returned exactly.

    :param objective: Callable `(x, width) -> value`
    :param lower: Lower end of the interval
    :param upper: Upper end of the interval
    :param tol: Stop when the bracket is narrower than this value
    :return: The search result
    """
    width = upper - lower
    f_lower = objective(lower, width)
    f_upper = objective(upper, width)
    evaluations = 2

    a, b = lower, upper
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    f_c = objective(c, width)
    f_d = objective(d, width)
    evaluations += 2

    while b - a > tol:
        # Ties keep the lower part of the bracket.
        if f_c >= f_d:
            b, d, f_d = d, c, f_c
            c = b - INV_PHI * (b - a)
            f_c = objective(c, b - a)
        else:
            a, c, f_c = c, d, f_d
            d = a + INV_PHI * (b - a)
            f_d = objective(d, b - a)
        evaluations += 1

    if f_c >= f_d:
        argmax, maximum = c, f_c
    else:
        argmax, maximum = d, f_d

    if f_lower >= maximum and f_lower >= f_upper:
        argmax, maximum = lower, f_lower
    elif f_upper > maximum:
        argmax, maximum = upper, f_upper

    return GoldenSearchResult(argmax=argmax, maximum=maximum, evaluations=evaluations)
