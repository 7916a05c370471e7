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


class InvalidProblemError(Exception):
    """
    Raised when a source distribution and a distortion table do not describe
    a valid lossy source coding problem.
    """

    pass


class DimensionMismatchError(InvalidProblemError):
    """
    Raised when the shapes of the supplied vectors and tables do not agree
    (i.e. a source over 3 symbols paired with a 2-row distortion table)
    """

    pass


class InvalidDistributionError(InvalidProblemError):
    """
    Raised when a probability vector or table has negative entries,
    non finite entries, or does not sum to 1 within tolerance.
    """

    pass


class InvalidDistortionError(InvalidProblemError):
    """
    Raised when a distortion table contains negative or non finite values.
    """

    pass


class SupportError(Exception):
    """
    Raised when a joint distribution is incompatible with the support
    required by an operation.

    i.e.:

     * Evaluating the tilted weight on a distribution having zero entries
     * A joint distribution placing mass on source symbols where P(x) = 0
    """

    pass


class InvalidTiltError(Exception):
    """
    Raised when the tilting parameters are out of range
    (i.e. `mu < 0`, `lam` outside [0, 1], or `lam = 0` where a division
    by `lam` is required)
    """

    pass


class InvalidConfigError(Exception):
    """
    Raised when a class is initialized with an invalid configuration and/or parameters.
    """

    pass


class OracleLimitError(Exception):
    """
    Raised when a brute-force oracle is invoked on an alphabet larger than
    the one it can enumerate.
    """

    pass


class ProblemFileNotFoundError(Exception):
    """
    Raised when a problem file does not exist.
    """

    pass


class ProblemSchemaError(Exception):
    """
    Raised when a problem file is not well-formed or does not match the
    documented schema.
    """

    pass
