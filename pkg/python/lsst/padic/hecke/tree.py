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

"""Coset calculus on the Bruhat-Tits tree of GL_2(F).

Vertices of the tree are the cosets G/KZ, represented canonically by

    g0(n, mu) = [[pi^n, mu], [0, 1]]          (side 0)
    g1(n, mu) = [[1, 0], [pi mu, pi^(n+1)]]    (side 1)

with ``mu = [mu_0] + pi [mu_1] + ... + pi^(n-1) [mu_(n-1)]`` a string of
Teichmuller digits. Digits are stored by their polynomial-basis encoding.
"""

__all__ = ["DigitString", "TreeVertex", "GMatrix", "vertexMatrix", "truncate",
           "enumerateSphere", "enumerateBall", "cartanReduce", "distanceFromBase",
           "children", "parent", "makeTreeDot", "BASE_VERTEX", "ALPHA_VERTEX"]

import itertools
from dataclasses import dataclass
from typing import Tuple

from .exceptions import NotInvertibleError, PrecisionLossError
from .latticeVector import KZElement


@dataclass(frozen=True)
class DigitString:
    """Digits ``mu_0, ..., mu_(n-1)`` as residue field encodings."""
    codes: Tuple[int, ...] = ()

    @property
    def n(self):
        return len(self.codes)

    def __len__(self):
        return len(self.codes)

    def digits(self, tower):
        return [tower.fqDecode(code) for code in self.codes]

    def value(self, tower):
        """The element sum pi^i [mu_i] of O_F."""
        result = tower.ofZero()
        for code in reversed(self.codes):
            result = tower.ofAdd(tower.ofTeichmuller(tower.fqDecode(code)), tower.ofMulPi(result))
        return result

    def truncate(self, m):
        if not 0 <= m <= self.n:
            raise IndexError("Cannot truncate %d digits to %d" % (self.n, m))
        return DigitString(self.codes[:m])

    def append(self, code):
        return DigitString(self.codes + (int(code),))

    @classmethod
    def fromDigits(cls, tower, digits):
        return cls(tuple(tower.fqEncode(digit) for digit in digits))


@dataclass(frozen=True)
class TreeVertex:
    """Canonical coset representative ``g^side_(n, mu)``."""
    side: int
    n: int
    mu: DigitString = DigitString()

    def __post_init__(self):
        if self.side not in (0, 1):
            raise ValueError("Side must be 0 or 1, got %r" % (self.side,))
        if self.n < 0 or len(self.mu) != self.n:
            raise ValueError("Level %d does not match %d digits" % (self.n, len(self.mu)))

    @property
    def sortKey(self):
        return (self.n, self.side, self.mu.codes)

    def __lt__(self, other):
        return self.sortKey < other.sortKey

    def label(self):
        return "%d,%d,%s" % (self.side, self.n, "".join("[%d]" % code for code in self.mu.codes))


BASE_VERTEX = TreeVertex(0, 0)
ALPHA_VERTEX = TreeVertex(1, 0)


class GMatrix:
    """Element pi**exponent * [[a, b], [c, d]] of GL_2(F) with integral
    entries known modulo pi**precision.
    """

    def __init__(self, tower, entries, exponent=0, precision=None):
        self.tower = tower
        self.entries = tuple(tuple(x) for x in entries)
        self.exponent = exponent
        self.precision = tower.cap if precision is None else min(precision, tower.cap)

    @classmethod
    def identity(cls, tower):
        return cls(tower, (tower.ofOne(), tower.ofZero(), tower.ofZero(), tower.ofOne()))

    @classmethod
    def central(cls, tower, k=1):
        return cls(tower, (tower.ofOne(), tower.ofZero(), tower.ofZero(), tower.ofOne()), k)

    @classmethod
    def alpha(cls, tower):
        return cls(tower, (tower.ofOne(), tower.ofZero(), tower.ofZero(), tower.uniformizer()))

    @classmethod
    def beta(cls, tower):
        return cls(tower, (tower.ofZero(), tower.ofOne(), tower.uniformizer(), tower.ofZero()))

    @classmethod
    def fromKZ(cls, k):
        return cls(k.tower, k.entries, k.central, k.precision)

    def __matmul__(self, other):
        t = self.tower
        a1, b1, c1, d1 = self.entries
        a2, b2, c2, d2 = other.entries
        entries = (t.ofAdd(t.ofMul(a1, a2), t.ofMul(b1, c2)),
                   t.ofAdd(t.ofMul(a1, b2), t.ofMul(b1, d2)),
                   t.ofAdd(t.ofMul(c1, a2), t.ofMul(d1, c2)),
                   t.ofAdd(t.ofMul(c1, b2), t.ofMul(d1, d2)))
        return GMatrix(t, entries, self.exponent + other.exponent, min(self.precision, other.precision))

    def _certifiedOrd(self, x, what):
        order = self.tower.ofOrd(x)
        if order is None or order >= self.precision:
            raise PrecisionLossError("Cannot certify the valuation of the %s modulo pi^%d"
                                     % (what, self.precision))
        return order

    def determinantOrder(self):
        t = self.tower
        a, b, c, d = self.entries
        det = t.ofSub(t.ofMul(a, d), t.ofMul(b, c))
        if not any(det) and self.precision == t.cap:
            raise NotInvertibleError("Matrix is singular")
        return det, self._certifiedOrd(det, "determinant")

    def inverse(self):
        t = self.tower
        a, b, c, d = self.entries
        det, vd = self.determinantOrder()
        unitInverse = t.ofInverse(t.ofDivPi(det, vd))
        adjugate = (d, t.ofNeg(b), t.ofNeg(c), a)
        entries = tuple(t.ofMul(unitInverse, x) for x in adjugate)
        return GMatrix(t, entries, -self.exponent - vd, self.precision - vd)

    def __repr__(self):
        return "GMatrix(pi^%d * %s, precision=%d)" % (
            self.exponent, [self.tower.ofToList(x) for x in self.entries], self.precision)


def vertexMatrix(vertex, tower):
    """The literal matrix g^side_(n, mu) of a vertex."""
    level = vertex.n if vertex.side == 0 else vertex.n + 1
    if level >= tower.cap:
        raise PrecisionLossError("Level %d is beyond the precision cap %d" % (vertex.n, tower.cap))
    mu = vertex.mu.value(tower)
    piPower = tower.ofMulPi(tower.ofOne(), level)
    if vertex.side == 0:
        entries = (piPower, mu, tower.ofZero(), tower.ofOne())
    else:
        entries = (tower.ofOne(), tower.ofZero(), tower.ofMulPi(mu), piPower)
    return GMatrix(tower, entries)


def truncate(mu, m):
    """First ``m`` digits of ``mu``."""
    return mu.truncate(m)


def distanceFromBase(vertex):
    """Tree distance from the base vertex KZ."""
    return vertex.n if vertex.side == 0 else vertex.n + 1


def enumerateSphere(side, n, tower):
    """All q**n vertices of one side at level ``n``, lexicographic in the
    digit encodings.
    """
    return [TreeVertex(side, n, DigitString(codes))
            for codes in itertools.product(range(tower.q), repeat=n)]


def enumerateBall(n, tower):
    """Vertices of both sides at levels up to ``n``, ordered by
    (level, side, digits).
    """
    return [vertex for m in range(n + 1) for side in (0, 1) for vertex in enumerateSphere(side, m, tower)]


def children(vertex, tower):
    """The q vertices one level further out on the same side."""
    return [TreeVertex(vertex.side, vertex.n + 1, vertex.mu.append(code)) for code in range(tower.q)]


def parent(vertex):
    """Neighbour one step closer to the base vertex, None for the base."""
    if vertex.n == 0:
        return None if vertex.side == 0 else BASE_VERTEX
    return TreeVertex(vertex.side, vertex.n - 1, vertex.mu.truncate(vertex.n - 1))


class _ColumnReducer:
    """Column operations on a primitive integral matrix, recording the
    inverse of the accumulated right factor.
    """

    def __init__(self, tower, entries):
        self.t = tower
        self.a, self.b, self.c, self.d = entries
        one, zero = tower.ofOne(), tower.ofZero()
        self.kinv = [one, zero, zero, one]

    def swap(self):
        self.a, self.b = self.b, self.a
        self.c, self.d = self.d, self.c
        k = self.kinv
        self.kinv = [k[2], k[3], k[0], k[1]]

    def subtractFromFirst(self, s):
        """col1 -= s * col2."""
        t = self.t
        self.a = t.ofSub(self.a, t.ofMul(s, self.b))
        self.c = t.ofSub(self.c, t.ofMul(s, self.d))
        k = self.kinv
        self.kinv = [k[0], k[1], t.ofAdd(k[2], t.ofMul(s, k[0])), t.ofAdd(k[3], t.ofMul(s, k[1]))]

    def subtractFromSecond(self, s):
        """col2 -= s * col1."""
        t = self.t
        self.b = t.ofSub(self.b, t.ofMul(s, self.a))
        self.d = t.ofSub(self.d, t.ofMul(s, self.c))
        k = self.kinv
        self.kinv = [t.ofAdd(k[0], t.ofMul(s, k[2])), t.ofAdd(k[1], t.ofMul(s, k[3])), k[2], k[3]]

    def scaleFirst(self, u):
        t = self.t
        self.a = t.ofMul(self.a, u)
        self.c = t.ofMul(self.c, u)
        uInv = t.ofInverse(u)
        self.kinv = [t.ofMul(uInv, self.kinv[0]), t.ofMul(uInv, self.kinv[1])] + self.kinv[2:]

    def scaleSecond(self, u):
        t = self.t
        self.b = t.ofMul(self.b, u)
        self.d = t.ofMul(self.d, u)
        uInv = t.ofInverse(u)
        self.kinv = self.kinv[:2] + [t.ofMul(uInv, self.kinv[2]), t.ofMul(uInv, self.kinv[3])]


def cartanReduce(g):
    """Write ``g = vertexMatrix(vertex) * kz`` with ``kz`` in KZ.

    Parameters
    ----------
    g : `GMatrix`

    Returns
    -------
    vertex : `TreeVertex`
    kz : `lsst.padic.hecke.KZElement`

    Raises
    ------
    PrecisionLossError
        Raised if a valuation needed to pick the coset is not certified.
    """
    t = g.tower
    orders = [t.ofOrd(x) for x in g.entries]
    known = [o for o in orders if o is not None and o < g.precision]
    if not known:
        raise PrecisionLossError("Matrix is zero modulo pi^%d" % g.precision)
    shift = min(known)
    # Entries zero to precision are dropped; the rest divide exactly.
    entries = [t.ofDivPi(x, shift) if o is not None and o < g.precision else t.ofZero()
               for x, o in zip(g.entries, orders)]
    precision = g.precision - shift
    if precision < 1:
        raise PrecisionLossError("Primitive part of %r has no certified digit" % (g,))
    reducer = _ColumnReducer(t, entries)

    if t.ofIsUnit(reducer.c) or t.ofIsUnit(reducer.d):
        if not t.ofIsUnit(reducer.d):
            reducer.swap()
        reducer.subtractFromFirst(t.ofMul(reducer.c, t.ofInverse(reducer.d)))
        reducer.scaleSecond(t.ofInverse(reducer.d))
        n = _certifiedOrder(t, reducer.a, precision, "diagonal entry")
        reducer.scaleFirst(t.ofInverse(t.ofDivPi(reducer.a, n)))
        digits, remainder = t.ofDigits(reducer.b, n)
        reducer.subtractFromSecond(remainder)
        vertex = TreeVertex(0, n, DigitString.fromDigits(t, digits))
    else:
        if not t.ofIsUnit(reducer.a):
            reducer.swap()
        if not t.ofIsUnit(reducer.a):
            raise NotInvertibleError("Primitive matrix %r has no unit entry" % (g,))
        reducer.subtractFromSecond(t.ofMul(reducer.b, t.ofInverse(reducer.a)))
        reducer.scaleFirst(t.ofInverse(reducer.a))
        m = _certifiedOrder(t, reducer.d, precision, "diagonal entry")
        reducer.scaleSecond(t.ofInverse(t.ofDivPi(reducer.d, m)))
        digits, remainder = t.ofDigits(reducer.c, m)
        reducer.subtractFromFirst(remainder)
        if not t.fqIsZero(digits[0]):
            raise RuntimeError("Lower-left entry of a side-1 reduction is not divisible by pi")
        vertex = TreeVertex(1, m - 1, DigitString.fromDigits(t, digits[1:]))

    # The KZ part is only determined modulo pi**(precision - distance).
    kz = KZElement(t, reducer.kinv, g.exponent + shift, precision - distanceFromBase(vertex))
    _checkReduction(vertexMatrix(vertex, t), kz, entries, precision)
    return vertex, kz


def _certifiedOrder(tower, x, precision, what):
    order = tower.ofOrd(x)
    if order is None or order >= precision:
        raise PrecisionLossError("Cannot certify the valuation of the %s modulo pi^%d" % (what, precision))
    return order


def _checkReduction(h, kz, primitive, precision):
    t = h.tower
    product = h @ GMatrix(t, kz.entries)
    for x, y in zip(product.entries, primitive):
        order = t.ofOrd(t.ofSub(x, y))
        if order is not None and order < precision:
            raise RuntimeError("Cartan reduction failed to reproduce its input")


def makeTreeDot(tower, depth, highlight=None):
    """DOT description of the ball of the given depth.

    Parameters
    ----------
    tower : `lsst.padic.hecke.RingTower`
    depth : `int`
        Largest level on either side.
    highlight : iterable of `TreeVertex`, optional
        Vertices drawn filled, e.g. the support of a function.

    Returns
    -------
    dot : `str`
    """
    highlight = set(highlight or ())
    lines = ["graph tree {", '    node [shape=ellipse, fontsize=10];']
    vertices = enumerateBall(depth, tower)
    names = {vertex: "v%d" % i for i, vertex in enumerate(vertices)}
    for vertex in vertices:
        style = ', style=filled, fillcolor="lightblue"' if vertex in highlight else ""
        lines.append('    %s [label="%s"%s];' % (names[vertex], vertex.label(), style))
    for vertex in vertices:
        up = parent(vertex)
        if up is not None:
            lines.append("    %s -- %s;" % (names[up], names[vertex]))
    lines.append("}")
    return "\n".join(lines) + "\n"
