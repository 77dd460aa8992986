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

"""Linear algebra over O_E and E at finite precision.

Every elimination step chooses a pivot of minimal certified valuation, so
all multipliers are integral and the accumulated transforms stay in
GL_n(O_E). A pivot choice that depends on digits below the precision of
the data raises `PrecisionLossError` instead of guessing.
"""

__all__ = ["EMatrix", "LatticeBasis", "echelonize", "detValuation", "smithForm",
           "elementaryDivisors", "solve", "inverse", "preimageLattice", "latticeContains"]

import numpy as np

import lsst.pipe.base as pipeBase

from .exceptions import NotInjectiveError, NotInvertibleError, PrecisionLossError
from .ringTower import EScalar, Valuation


class EMatrix:
    """Dense matrix of `EScalar` entries.

    Parameters
    ----------
    tower : `lsst.padic.hecke.RingTower`
    entries : `numpy.ndarray`
        Two-dimensional object array of `EScalar`.
    """

    def __init__(self, tower, entries):
        if entries.ndim != 2:
            raise ValueError("EMatrix entries must be two-dimensional, got shape %s" % (entries.shape,))
        self.tower = tower
        self.entries = entries

    @classmethod
    def zeros(cls, tower, rows, cols):
        entries = np.empty((rows, cols), dtype=object)
        entries.fill(EScalar.zero(tower))
        return cls(tower, entries)

    @classmethod
    def identity(cls, tower, n):
        matrix = cls.zeros(tower, n, n)
        for i in range(n):
            matrix.entries[i, i] = EScalar.one(tower)
        return matrix

    @classmethod
    def diagonal(cls, tower, scalars):
        matrix = cls.zeros(tower, len(scalars), len(scalars))
        for i, scalar in enumerate(scalars):
            matrix.entries[i, i] = scalar
        return matrix

    @classmethod
    def fromRows(cls, tower, rows):
        """Build from nested sequences of `EScalar` or integers."""
        rows = [list(row) for row in rows]
        cols = len(rows[0]) if rows else 0
        if any(len(row) != cols for row in rows):
            raise ValueError("Rows of unequal length")
        matrix = cls.zeros(tower, len(rows), cols)
        for i, row in enumerate(rows):
            for j, value in enumerate(row):
                matrix.entries[i, j] = value if isinstance(value, EScalar) else EScalar.fromInt(tower, value)
        return matrix

    @classmethod
    def fromColumns(cls, tower, columns, rows):
        matrix = cls.zeros(tower, rows, len(columns))
        for j, column in enumerate(columns):
            for i, value in enumerate(column):
                matrix.entries[i, j] = value
        return matrix

    @property
    def shape(self):
        return self.entries.shape

    @property
    def rows(self):
        return self.entries.shape[0]

    @property
    def cols(self):
        return self.entries.shape[1]

    def __getitem__(self, index):
        return self.entries[index]

    def copy(self):
        return EMatrix(self.tower, self.entries.copy())

    def column(self, j):
        return list(self.entries[:, j])

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError("Cannot multiply %s by %s" % (self.shape, other.shape))
        if self.cols == 0:
            return EMatrix.zeros(self.tower, self.rows, other.cols)
        return EMatrix(self.tower, np.dot(self.entries, other.entries))

    def apply(self, vector):
        """Product with a sequence of `EScalar`, as a list."""
        column = EMatrix.fromColumns(self.tower, [list(vector)], len(vector))
        return (self @ column).column(0)

    def __sub__(self, other):
        return EMatrix(self.tower, self.entries - other.entries)

    def __add__(self, other):
        return EMatrix(self.tower, self.entries + other.entries)

    def isZero(self):
        return all(x.isZero() for x in self.entries.flat)

    def __eq__(self, other):
        if not isinstance(other, EMatrix):
            return NotImplemented
        return self.shape == other.shape and (self - other).isZero()

    __hash__ = None

    def __repr__(self):
        return "EMatrix(%dx%d)" % self.shape


def _choosePivot(entries, rows, cols):
    """Position of the entry of least certified valuation in a block.

    Returns None when every entry is zero at its precision.

    Raises
    ------
    PrecisionLossError
        Raised if an entry known only modulo pi**c with c below the best
        certified valuation could be the better pivot.
    """
    best = None
    bound = None
    for i in rows:
        for j in cols:
            scalar = entries[i, j]
            if not scalar.isZero():
                if best is None or scalar.exponent < best[0]:
                    best = (scalar.exponent, i, j)
            elif not scalar.isExactZero():
                bound = scalar.absprec if bound is None else min(bound, scalar.absprec)
    if best is None:
        return None
    if bound is not None and bound < best[0]:
        raise PrecisionLossError("Pivot of valuation %d is not certified: another entry is only known "
                                 "modulo pi^%d" % (best[0], bound))
    return best[1], best[2]


def _swapRows(array, i, j):
    if i != j:
        array[[i, j], :] = array[[j, i], :]


def _swapCols(array, i, j):
    if i != j:
        array[:, [i, j]] = array[:, [j, i]]


def _remainderBound(entries, start):
    """Infinite if the rows from ``start`` on are exact zeros, otherwise the
    least precision among them.
    """
    block = [x for x in entries[start:, :].flat if not x.isExactZero()]
    if not block:
        return None
    return min(x.absprec for x in block)


def echelonize(m):
    """Row echelon form by minimal-valuation pivoting.

    Parameters
    ----------
    m : `EMatrix`

    Returns
    -------
    echelon : `EMatrix`
        Row echelon form with ``transform @ m == echelon``.
    transform : `EMatrix`
        Product of row swaps and integral row operations, in GL(O_E).
    pivots : `list` of `tuple`
        ``(row, col, valuation)`` per pivot, valuations in val_F units.

    Raises
    ------
    PrecisionLossError
        Raised if a pivot decision is not certified.
    """
    tower = m.tower
    a = m.entries.copy()
    t = EMatrix.identity(tower, m.rows).entries
    pivots = []
    r = 0
    for col in range(m.cols):
        if r == m.rows:
            break
        position = _choosePivot(a, range(r, m.rows), [col])
        if position is None:
            continue
        _swapRows(a, r, position[0])
        _swapRows(t, r, position[0])
        pivotInverse = a[r, col].inverse()
        for i in range(r + 1, m.rows):
            if a[i, col].isExactZero():
                continue
            factor = a[i, col]*pivotInverse
            a[i, :] = a[i, :] - a[r, :]*factor
            t[i, :] = t[i, :] - t[r, :]*factor
        pivots.append((r, col, a[r, col].valuation()))
        r += 1
    return EMatrix(tower, a), EMatrix(tower, t), pivots


def detValuation(m):
    """Valuation of the determinant of a square matrix, val_F units.

    Returns ``Finite`` when all pivots are certified, ``Infinite`` when the
    matrix is exactly singular and ``AtLeast`` otherwise.
    """
    if m.rows != m.cols:
        raise ValueError("Determinant of a non-square %dx%d matrix" % m.shape)
    echelon, _, pivots = echelonize(m)
    total = sum(echelon[row, col].exponent for row, col, _ in pivots)
    if len(pivots) == m.rows:
        return Valuation.finite(total*m.tower.f)
    bound = _remainderBound(echelon.entries, len(pivots))
    if bound is None:
        return Valuation.infinite()
    return Valuation.atLeast((total + bound)*m.tower.f)


def smithForm(m):
    """Smith normal form over O_E with full minimal-valuation pivoting.

    Parameters
    ----------
    m : `EMatrix`

    Returns
    -------
    result : `lsst.pipe.base.Struct`
        ``smith``, ``left``, ``right`` with ``left @ m @ right == smith``
        and ``left``, ``right`` in GL(O_E); ``divisors``, the nonzero
        diagonal entries in order of nondecreasing valuation; ``rank``.
    """
    tower = m.tower
    s = m.entries.copy()
    u = EMatrix.identity(tower, m.rows).entries
    v = EMatrix.identity(tower, m.cols).entries
    rank = 0
    for k in range(min(m.rows, m.cols)):
        position = _choosePivot(s, range(k, m.rows), range(k, m.cols))
        if position is None:
            break
        _swapRows(s, k, position[0])
        _swapRows(u, k, position[0])
        _swapCols(s, k, position[1])
        _swapCols(v, k, position[1])
        pivotInverse = s[k, k].inverse()
        for i in range(k + 1, m.rows):
            if not s[i, k].isExactZero():
                factor = s[i, k]*pivotInverse
                s[i, :] = s[i, :] - s[k, :]*factor
                u[i, :] = u[i, :] - u[k, :]*factor
        for j in range(k + 1, m.cols):
            if not s[k, j].isExactZero():
                factor = s[k, j]*pivotInverse
                s[:, j] = s[:, j] - s[:, k]*factor
                v[:, j] = v[:, j] - v[:, k]*factor
        rank += 1
    divisors = [s[i, i] for i in range(rank)]
    return pipeBase.Struct(smith=EMatrix(tower, s), left=EMatrix(tower, u), right=EMatrix(tower, v),
                           divisors=divisors, rank=rank)


def elementaryDivisors(m):
    """Valuations of the elementary divisors, ascending, in val_F units.

    Positions beyond the certified rank report ``Infinite`` for exact zeros
    and ``AtLeast`` otherwise.
    """
    result = smithForm(m)
    valuations = [d.valuation() for d in result.divisors]
    missing = min(m.rows, m.cols) - result.rank
    if missing:
        bound = _remainderBound(result.smith.entries, result.rank)
        tail = Valuation.infinite() if bound is None else Valuation.atLeast(bound*m.tower.f)
        valuations.extend([tail]*missing)
    return valuations


def _smithSolve(result, rhs):
    """Solve ``smith @ y == left @ rhs`` and return ``right @ y``."""
    transformed = result.left.apply(rhs)
    y = [transformed[i]*d.inverse() for i, d in enumerate(result.divisors)]
    return result.right.apply(y)


def solve(m, rhs):
    """Unique solution of a square system of full rank over E.

    Raises
    ------
    NotInvertibleError
        Raised if the matrix is singular at working precision.
    """
    if m.rows != m.cols:
        raise ValueError("solve needs a square matrix, got %dx%d" % m.shape)
    result = smithForm(m)
    if result.rank < m.rows:
        raise NotInvertibleError("Matrix has rank %d < %d at working precision" % (result.rank, m.rows))
    return _smithSolve(result, rhs)


def inverse(m):
    """Inverse over E of a square matrix of full rank."""
    if m.rows != m.cols:
        raise ValueError("Cannot invert a non-square %dx%d matrix" % m.shape)
    result = smithForm(m)
    if result.rank < m.rows:
        raise NotInvertibleError("Matrix has rank %d < %d at working precision" % (result.rank, m.rows))
    scaled = result.right.copy()
    for j, d in enumerate(result.divisors):
        scaled.entries[:, j] = scaled.entries[:, j]*d.inverse()
    return scaled @ result.left


class LatticeBasis:
    """O_E-lattice spanned by E-linearly independent vectors.

    Parameters
    ----------
    tower : `lsst.padic.hecke.RingTower`
    dimension : `int`
        Ambient dimension.
    vectors : `list` of `list` of `EScalar`
        Generators.
    divisorExponents : `list` of `int`, optional
        Powers of pi_E scaling the generators against a unimodular frame,
        ascending; zeros if omitted.
    """

    def __init__(self, tower, dimension, vectors, divisorExponents=None):
        vectors = [list(vector) for vector in vectors]
        if any(len(vector) != dimension for vector in vectors):
            raise ValueError("Lattice generators must have dimension %d" % dimension)
        self.tower = tower
        self.dimension = dimension
        self.vectors = vectors
        self.divisorExponents = [0]*len(vectors) if divisorExponents is None else list(divisorExponents)

    @classmethod
    def standard(cls, tower, dimension):
        one, zero = EScalar.one(tower), EScalar.zero(tower)
        vectors = [[one if i == j else zero for i in range(dimension)] for j in range(dimension)]
        return cls(tower, dimension, vectors)

    @property
    def rank(self):
        return len(self.vectors)

    def scaled(self, k):
        """The lattice pi**k L."""
        piK = EScalar.pi(self.tower, k)
        return LatticeBasis(self.tower, self.dimension, [[x*piK for x in vector] for vector in self.vectors],
                            [exponent + k for exponent in self.divisorExponents])

    def basisMatrix(self):
        """Generators as the columns of an `EMatrix`."""
        return EMatrix.fromColumns(self.tower, self.vectors, self.dimension)

    def __repr__(self):
        return "LatticeBasis(dimension=%d, rank=%d, exponents=%s)" % (self.dimension, self.rank,
                                                                     self.divisorExponents)


def preimageLattice(phi, target=None):
    """Basis of ``{x : phi x in target}``.

    Parameters
    ----------
    phi : `EMatrix`
        Linear map, injective at working precision.
    target : `LatticeBasis`, optional
        Full-rank lattice in the codomain; the standard lattice if None.

    Returns
    -------
    lattice : `LatticeBasis`

    Raises
    ------
    NotInjectiveError
        Raised if ``phi`` has a kernel at working precision.
    """
    tower = phi.tower
    if target is not None:
        if target.rank != target.dimension or target.dimension != phi.rows:
            raise ValueError("Target lattice must have full rank in dimension %d" % phi.rows)
        phi = inverse(target.basisMatrix()) @ phi
    result = smithForm(phi)
    if result.rank < phi.cols:
        raise NotInjectiveError("Map of shape %dx%d has rank %d at working precision"
                                % (phi.rows, phi.cols, result.rank))
    columns = []
    for i, d in enumerate(result.divisors):
        dInverse = d.inverse()
        columns.append((-d.exponent, [x*dInverse for x in result.right.column(i)]))
    columns.sort(key=lambda item: item[0])
    return LatticeBasis(tower, phi.cols, [vector for _, vector in columns],
                        [exponent for exponent, _ in columns])


def latticeContains(outer, candidate):
    """True if ``candidate`` is an O_E-combination of the generators.

    Raises
    ------
    PrecisionLossError
        Raised if integrality of a coordinate cannot be certified.
    """
    if len(candidate) != outer.dimension:
        raise ValueError("Candidate of length %d in a lattice of dimension %d"
                         % (len(candidate), outer.dimension))
    if outer.rank == 0:
        return all(x.isZero() for x in candidate)
    result = smithForm(outer.basisMatrix())
    transformed = result.left.apply(candidate)
    for i, value in enumerate(transformed):
        if i < result.rank:
            if not (value*result.divisors[i].inverse()).isIntegral():
                return False
        elif not value.isZero():
            return False
    return True
