# This file is part of padic_hecke.
#
# Developed for the LSST Data Management System.
# This product includes software developed by the LSST Project
# (https://www.lsst.org).
# See the COPYRIGHT file at the top-level directory of this distribution
# for details of code ownership.
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <https://www.gnu.org/licenses/>.

"""JSON-ready forms of ring elements, vectors, functions and matrices.

Ring elements are nested little-endian digit lists, one list of ``f``
integers per power of y. Scalars carry their exponent and absolute
precision in powers of pi; a precision of None marks exact data.
"""

__all__ = ["elementToJson", "elementFromJson", "escalarToJson", "escalarFromJson",
           "latticeVectorToJson", "latticeVectorFromJson", "inducedFunctionToJson",
           "inducedFunctionFromJson", "ematrixToJson", "ematrixFromJson", "latticeBasisToJson",
           "latticeBasisFromJson", "dumpJson", "loadJson"]

import json
import math

import numpy as np

from .dvrLinalg import EMatrix, LatticeBasis
from .exceptions import ParseError
from .induction import InducedFunction
from .latticeVector import LatticeVector
from .ringTower import EScalar
from .tree import DigitString, TreeVertex

_DECODE_ERRORS = (KeyError, TypeError, ValueError, IndexError, AttributeError)


def elementToJson(tower, x):
    return tower.ofToList(x)


def elementFromJson(tower, data):
    try:
        return tower.ofFromList(data)
    except _DECODE_ERRORS as e:
        raise ParseError("Malformed ring element %r: %s" % (data, e)) from e


def _precisionToJson(absprec):
    return None if absprec == math.inf else int(absprec)


def _precisionFromJson(data):
    return math.inf if data is None else int(data)


def escalarToJson(scalar):
    if scalar.isZero():
        return {"zero": True, "precision": _precisionToJson(scalar.absprec)}
    return {"exponent": scalar.exponent, "unit": scalar.tower.ofToList(scalar.unit),
            "precision": _precisionToJson(scalar.absprec)}


def escalarFromJson(tower, data):
    try:
        if data.get("zero"):
            return EScalar.zero(tower, _precisionFromJson(data["precision"]))
        unit = tower.ofFromList(data["unit"])
        absprec = data.get("precision")
        exponent = int(data["exponent"])
        if absprec is None:
            return EScalar(tower, unit, exponent)
        return EScalar(tower, unit, exponent, int(absprec))
    except _DECODE_ERRORS as e:
        raise ParseError("Malformed scalar %r: %s" % (data, e)) from e


def latticeVectorToJson(vector):
    return [[list(index), escalarToJson(scalar)] for index, scalar in vector.items()]


def latticeVectorFromJson(profile, data):
    vector = LatticeVector(profile)
    try:
        for index, scalar in data:
            index = tuple(int(i) for i in index)
            if len(index) != len(profile.shape) or any(not 0 <= i < n for i, n in zip(index, profile.shape)):
                raise ValueError("multi-index %s outside %s" % (index, profile.d))
            vector.coeffs[index] = escalarFromJson(profile.tower, scalar)
    except _DECODE_ERRORS as e:
        raise ParseError("Malformed lattice vector: %s" % e) from e
    return vector


def inducedFunctionToJson(f):
    return [{"side": vertex.side, "n": vertex.n, "digits": list(vertex.mu.codes),
             "vector": latticeVectorToJson(vector)} for vertex, vector in f.items()]


def inducedFunctionFromJson(profile, data):
    """Inverse of `inducedFunctionToJson`; repeated vertices accumulate."""
    f = InducedFunction(profile)
    try:
        for term in data:
            codes = tuple(int(c) for c in term["digits"])
            if any(not 0 <= c < profile.tower.q for c in codes):
                raise ValueError("digit encodings %s outside GF(%d)" % (codes, profile.tower.q))
            vertex = TreeVertex(int(term["side"]), int(term["n"]), DigitString(codes))
            f.addTerm(vertex, latticeVectorFromJson(profile, term["vector"]))
    except _DECODE_ERRORS as e:
        raise ParseError("Malformed induced function: %s" % e) from e
    return f


def ematrixToJson(m):
    return {"rows": m.rows, "cols": m.cols,
            "entries": [[escalarToJson(x) for x in row] for row in m.entries]}


def ematrixFromJson(tower, data):
    try:
        rows, cols = int(data["rows"]), int(data["cols"])
        entries = np.empty((rows, cols), dtype=object)
        if len(data["entries"]) != rows:
            raise ValueError("expected %d rows" % rows)
        for i, row in enumerate(data["entries"]):
            if len(row) != cols:
                raise ValueError("row %d does not have %d entries" % (i, cols))
            for j, x in enumerate(row):
                entries[i, j] = escalarFromJson(tower, x)
    except _DECODE_ERRORS as e:
        raise ParseError("Malformed matrix: %s" % e) from e
    return EMatrix(tower, entries)


def latticeBasisToJson(lattice):
    return {"dimension": lattice.dimension, "divisorExponents": list(lattice.divisorExponents),
            "vectors": [[escalarToJson(x) for x in vector] for vector in lattice.vectors]}


def latticeBasisFromJson(tower, data):
    try:
        vectors = [[escalarFromJson(tower, x) for x in vector] for vector in data["vectors"]]
        return LatticeBasis(tower, int(data["dimension"]), vectors, data.get("divisorExponents"))
    except _DECODE_ERRORS as e:
        raise ParseError("Malformed lattice basis: %s" % e) from e


def dumpJson(data):
    """Deterministic JSON text: sorted keys, two-space indent, final newline."""
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def loadJson(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError("Invalid JSON: %s" % e) from e
