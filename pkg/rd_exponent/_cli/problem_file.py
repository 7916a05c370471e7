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

from pathlib import Path
from typing import List, Literal, Union

from pydantic import BaseModel, ConfigDict, ValidationError

from rd_exponent._probability import Problem, validate_problem
from rd_exponent.exceptions import ProblemFileNotFoundError, ProblemSchemaError


class ProblemFile(BaseModel):
    """
    The JSON schema of a problem file.

    ```json
    {
        "source": [0.5, 0.5],
        "distortion": [[0, 1], [1, 0]],
        "labels_x": ["0", "1"],
        "labels_y": ["0", "1"],
        "units": "nats"
    }
    ```

    :param source: The source distribution P
    :type source: List[float]
    :param distortion: The distortion table, one row per source symbol
    :type distortion: List[List[float]]
    :param labels_x: Optional source symbol labels
    :type labels_x: Union[List[str], None]
    :param labels_y: Optional reproduction symbol labels
    :type labels_y: Union[List[str], None]
    :param units: Default unit of the reported rates and exponents
    :type units: str
    """

    source: List[float]
    distortion: List[List[float]]
    labels_x: Union[List[str], None] = None
    labels_y: Union[List[str], None] = None
    units: Literal["nats", "bits"] = "nats"

    model_config = ConfigDict(extra="forbid")

    def to_problem(self) -> Problem:
        return validate_problem(
            self.source, self.distortion, self.labels_x, self.labels_y
        )


def _describe(error: ValidationError) -> str:
    return "; ".join(
        f"{'.'.join(str(part) for part in item['loc']) or '<root>'}: {item['msg']}"
        for item in error.errors()
    )


def load_problem_file(path: Union[str, Path]) -> ProblemFile:
    """
    Reads and checks the structure of a problem file.

    :param path: Location of the JSON file
    :return: The parsed file
    :raises ProblemFileNotFoundError: The file does not exist
    :raises ProblemSchemaError: The file is not valid JSON or does not match
        the schema
    """
    path = Path(path)
    if not path.is_file():
        raise ProblemFileNotFoundError(f"Problem file `{path}` not found")
    try:
        return ProblemFile.model_validate_json(path.read_text(encoding="utf-8"))
    except ValidationError as error:
        raise ProblemSchemaError(f"Invalid problem file `{path}`: {_describe(error)}")


def parse_problem(path: Union[str, Path]) -> Problem:
    """
    Reads a problem file and validates the problem it describes.

    :param path: Location of the JSON file
    :return: The validated problem
    :raises ProblemFileNotFoundError: The file does not exist
    :raises ProblemSchemaError: The file does not match the schema
    :raises InvalidProblemError: The problem is not valid
    """
    return load_problem_file(path).to_problem()
