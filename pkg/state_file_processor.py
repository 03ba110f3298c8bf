# state_file_processor.py
# Handles loading, validating and writing text state files for the CLI

import math

import numpy as np

from entanglement_measures import BipartiteCut
from tensor_core import SubsystemShape, hermitian_eigenvalues, is_hermitian

FORMAT_TAG = "dims"
# Density inputs must be Hermitian, unit trace and PSD to this tolerance
DENSITY_TOL = 1e-8


class StateFileError(ValueError):
    def __init__(self, message, line=None, field=None):
        """
        Error in a state file

        Parameters:
        - message: What is wrong
        - line: 1-based line number, if known
        - field: 1-based field number within the line, if known
        """
        self.line = line
        self.field = field
        location = ""
        if line is not None:
            location = f"line {line}"
            if field is not None:
                location += f", field {field}"
            location += ": "
        super().__init__(location + message)


class StateFileProcessor:
    def __init__(self, tol=DENSITY_TOL):
        """
        Initialize the state file processor

        Parameters:
        - tol: Tolerance for the Hermitian, unit-trace and PSD checks
        """
        self.tol = tol

    def load_state(self, file_path):
        """
        Load a density matrix from a state file

        Parameters:
        - file_path: Path to the text file

        Returns:
        - (density matrix, SubsystemShape)
        """
        try:
            with open(file_path, "r", encoding="utf-8") as file:
                text = file.read()
        except OSError as e:
            raise StateFileError(f"cannot read {file_path}: {e}") from e
        return self.parse_text(text)

    def parse_text(self, text):
        """
        Parse state-file text: `dims dA dB`, then one `re,im` row per line

        Parameters:
        - text: The file contents

        Returns:
        - (validated density matrix, SubsystemShape)
        """
        lines = [(number, line.split()) for number, line in enumerate(text.splitlines(), 1)]
        lines = [(number, fields) for number, fields in lines if fields]
        if not lines:
            raise StateFileError("file is empty")

        shape = self._parse_header(*lines[0])
        dim = shape.total
        rows = lines[1:]
        if len(rows) != dim:
            line = rows[dim][0] if len(rows) > dim else None
            raise StateFileError(f"expected {dim} matrix rows, found {len(rows)}", line=line)

        matrix = np.empty((dim, dim), dtype=complex)
        for i, (number, fields) in enumerate(rows):
            if len(fields) != dim:
                raise StateFileError(f"expected {dim} entries, found {len(fields)}", line=number)
            for j, token in enumerate(fields):
                matrix[i, j] = self._parse_entry(token, number, j + 1)

        self._validate_density(matrix)
        return matrix, shape

    def _parse_header(self, number, fields):
        if fields[0] != FORMAT_TAG:
            raise StateFileError(f"expected format tag '{FORMAT_TAG}', found '{fields[0]}'",
                                 line=number, field=1)
        if len(fields) != 3:
            raise StateFileError("header must be 'dims dA dB'", line=number)
        dims = []
        for position, token in enumerate(fields[1:], 2):
            try:
                value = int(token)
            except ValueError:
                raise StateFileError(f"dimension '{token}' is not an integer",
                                     line=number, field=position) from None
            if value < 2:
                raise StateFileError(f"dimension {value} must be >= 2", line=number, field=position)
            dims.append(value)
        return SubsystemShape(tuple(dims))

    def _parse_entry(self, token, number, position):
        parts = token.split(",")
        if len(parts) != 2:
            raise StateFileError(f"entry '{token}' is not a 're,im' pair", line=number, field=position)
        try:
            real, imag = float(parts[0]), float(parts[1])
        except ValueError:
            raise StateFileError(f"entry '{token}' is not numeric", line=number, field=position) from None
        if not (math.isfinite(real) and math.isfinite(imag)):
            raise StateFileError(f"entry '{token}' is not finite", line=number, field=position)
        return complex(real, imag)

    def _validate_density(self, matrix):
        if not is_hermitian(matrix, self.tol):
            raise StateFileError("matrix is not Hermitian")
        trace = np.trace(matrix).real
        if abs(trace - 1.0) > self.tol:
            raise StateFileError(f"trace is {trace:.12g}, expected 1")
        smallest = hermitian_eigenvalues(matrix)[-1]
        if smallest < -self.tol:
            raise StateFileError(f"matrix is not positive semidefinite (eigenvalue {smallest:.3e})")

    def cut_for(self, shape):
        """BipartiteCut matching a two-factor shape"""
        if len(shape) != 2:
            raise StateFileError(f"expected two subsystems, found {len(shape)}")
        return BipartiteCut(*shape.dims)

    def format_state(self, rho, shape):
        """Render a matrix in the state-file format"""
        shape = shape if isinstance(shape, SubsystemShape) else SubsystemShape(tuple(shape))
        lines = [" ".join([FORMAT_TAG] + [str(d) for d in shape.dims])]
        for row in np.asarray(rho, dtype=complex):
            lines.append(" ".join(f"{z.real:.17g},{z.imag:.17g}" for z in row))
        return "\n".join(lines) + "\n"

    def write_state(self, file_path, rho, shape):
        with open(file_path, "w", encoding="utf-8") as file:
            file.write(self.format_state(rho, shape))
