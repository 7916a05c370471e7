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

import csv
import sys
from contextlib import contextmanager
from typing import Any, Iterator, Mapping, Sequence, TextIO

NUMBER_FORMAT = "{:.12g}"


def format_value(value: Any) -> Any:
    """Floats are written with 12 significant digits."""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return NUMBER_FORMAT.format(value)
    return value


class CsvTable:
    def __init__(self, stream: TextIO, fieldnames: Sequence[str]) -> None:
        self._writer = csv.DictWriter(
            stream, fieldnames=list(fieldnames), lineterminator="\r\n"
        )
        self._writer.writeheader()

    def write(self, row: Mapping[str, Any]) -> None:
        self._writer.writerow({key: format_value(value) for key, value in row.items()})


@contextmanager
def csv_table(path: str, fieldnames: Sequence[str]) -> Iterator[CsvTable]:
    """
    Opens a CSV table with a header row, `-` writing to the standard output.

    :param path: Destination file
    :param fieldnames: The columns
    """
    if path == "-":
        yield CsvTable(sys.stdout, fieldnames)
        sys.stdout.flush()
        return

    stream = open(path, "w", newline="", encoding="utf-8")
    try:
        yield CsvTable(stream, fieldnames)
    finally:
        stream.close()
