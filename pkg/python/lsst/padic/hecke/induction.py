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

"""Compactly induced representations and the Hecke operator T.

An element of the induction is a finitely supported function on G/KZ,
stored as a map from canonical tree vertices to lattice vectors: the term
``[g, v]`` is recorded on the vertex of ``g`` after absorbing the KZ part of
``g`` into ``v``.
"""

__all__ = ["InducedFunction", "SatakeData", "fromPair", "actG", "tPlus", "tMinus",
           "heckeT", "heckeGeneric", "isIntegralFn"]

from lsst.utils.logging import getLogger

from .exceptions import ConfigInvalidError
from .latticeVector import (KZElement, LatticeVector, actKZ, conjugatedStep, psiAlphaInv,
                            sigmaPi)
from .ringTower import EScalar
from .tree import (ALPHA_VERTEX, BASE_VERTEX, TreeVertex, cartanReduce, enumerateSphere,
                   vertexMatrix)

_LOG = getLogger(__name__)


class InducedFunction:
    """Finitely supported function G/KZ -> V.

    Parameters
    ----------
    profile : `lsst.padic.hecke.WeightProfile`
        Weights of the inducing representation.
    terms : `dict` [`TreeVertex`, `LatticeVector`], optional
        Initial terms; exactly zero vectors are dropped.
    """

    def __init__(self, profile, terms=None):
        self.profile = profile
        self.terms = {}
        for vertex, vector in (terms or {}).items():
            self.addTerm(vertex, vector)

    @property
    def tower(self):
        return self.profile.tower

    @classmethod
    def single(cls, profile, vertex, vector):
        return cls(profile, {vertex: vector})

    def addTerm(self, vertex, vector):
        """Accumulate ``[vertexMatrix(vertex), vector]`` into this function."""
        if vertex in self.terms:
            vector = self.terms[vertex] + vector
        if vector.isExactZero():
            self.terms.pop(vertex, None)
        else:
            self.terms[vertex] = vector

    def vector(self, vertex):
        """Value at a vertex, the zero vector off the stored terms."""
        return self.terms.get(vertex, LatticeVector(self.profile))

    def items(self):
        """Terms ordered by (level, side, digits)."""
        return sorted(self.terms.items(), key=lambda item: item[0].sortKey)

    def support(self):
        """Vertices whose vector is nonzero at its precision."""
        return sorted(vertex for vertex, vector in self.terms.items() if not vector.isZero())

    def topLevel(self):
        """Largest level in the support, None for the zero function."""
        support = self.support()
        return max(vertex.n for vertex in support) if support else None

    def restrictedTo(self, vertices):
        vertices = set(vertices)
        return InducedFunction(self.profile, {x: v for x, v in self.terms.items() if x in vertices})

    def copy(self):
        return InducedFunction(self.profile, dict(self.terms))

    def __add__(self, other):
        result = self.copy()
        for vertex, vector in other.terms.items():
            result.addTerm(vertex, vector)
        return result

    def __neg__(self):
        return InducedFunction(self.profile, {x: -v for x, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scaled(self, scalar):
        return InducedFunction(self.profile, {x: v.scaled(scalar) for x, v in self.terms.items()})

    def isZero(self):
        return all(vector.isZero() for vector in self.terms.values())

    def __eq__(self, other):
        if not isinstance(other, InducedFunction):
            return NotImplemented
        return (self - other).isZero()

    __hash__ = None

    def isIntegral(self):
        return all(vector.isIntegral() for vector in self.terms.values())

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return "InducedFunction(%s)" % ", ".join("[%s, %r]" % (x.label(), v) for x, v in self.items())


class SatakeData:
    """The eigenvalue a_p with val(a_p) > 0, optionally with Satake
    parameters alpha, beta such that a_p = alpha**f + beta**f.

    Parameters
    ----------
    tower : `lsst.padic.hecke.RingTower`
    ap : `lsst.padic.hecke.EScalar`
    alpha, beta : `lsst.padic.hecke.EScalar`, optional

    Raises
    ------
    ConfigInvalidError
        Raised if val(a_p) is not certified positive.
    """

    def __init__(self, tower, ap, alpha=None, beta=None):
        self.tower = tower
        self.ap = ap
        self.alpha = alpha
        self.beta = beta
        self.validate()

    @classmethod
    def fromAp(cls, tower, exponent, unit=1):
        """a_p = unit * pi**exponent with ``unit`` a rational integer."""
        if unit % tower.p == 0:
            raise ConfigInvalidError("a_p unit %d is divisible by p=%d" % (unit, tower.p))
        return cls(tower, EScalar(tower, tower.ofFromInt(unit), exponent))

    @classmethod
    def fromSatake(cls, tower, alpha, beta):
        f = tower.f
        return cls(tower, alpha**f + beta**f, alpha, beta)

    @classmethod
    def fromValuations(cls, tower, valAlpha, valBeta):
        """Satake parameters pi**(valAlpha/f), pi**(valBeta/f); the valuations
        are in the normalization val_F(p) = e*f and must be multiples of f.
        """
        f = tower.f
        if valAlpha % f or valBeta % f:
            raise ConfigInvalidError("Satake valuations (%d, %d) must be multiples of f=%d"
                                     % (valAlpha, valBeta, f))
        return cls.fromSatake(tower, EScalar.pi(tower, valAlpha//f), EScalar.pi(tower, valBeta//f))

    def validate(self):
        valuation = self.ap.valuation()
        if valuation.isInfinite():
            return
        if valuation.value <= 0:
            raise ConfigInvalidError("a_p must lie in the maximal ideal, got valuation %s" % valuation)

    def delta(self, index=0):
        """The one of a_p and sigma(pi) with the smaller valuation, a_p on a tie."""
        piSigma = sigmaPi(self.tower, index)
        valuation = self.ap.valuation()
        if valuation.isInfinite() or valuation.value > piSigma.valuation().value:
            return piSigma
        return self.ap

    def toDict(self):
        result = {"apValuation": str(self.ap.valuation())}
        if self.alpha is not None:
            result["alphaValuation"] = str(self.alpha.valuation())
            result["betaValuation"] = str(self.beta.valuation())
        return result


def fromPair(g, v):
    """The function ``[g, v]`` on its canonical vertex.

    Parameters
    ----------
    g : `lsst.padic.hecke.GMatrix`
    v : `lsst.padic.hecke.LatticeVector`

    Returns
    -------
    f : `InducedFunction`
    """
    vertex, kz = cartanReduce(g)
    return InducedFunction.single(v.profile, vertex, actKZ(kz, v))


def actG(g, f):
    """Left translation ``g [h, v] = [g h, v]`` applied termwise."""
    result = InducedFunction(f.profile)
    for vertex, vector in f.items():
        for target, image in fromPair(g @ vertexMatrix(vertex, f.tower), vector).terms.items():
            result.addTerm(target, image)
    return result


def _digit(tower, code):
    return tower.ofTeichmuller(tower.fqDecode(code))


def _tPlusTerm(vertex, v, result):
    tower = v.tower
    for code in range(tower.q):
        target = TreeVertex(vertex.side, vertex.n + 1, vertex.mu.append(code))
        lam = _digit(tower, code)
        if vertex.side == 0:
            image = conjugatedStep(v, lam)
        else:
            image = psiAlphaInv(actKZ(KZElement.lowerUnipotent(tower, tower.ofNeg(lam)), v))
        result.addTerm(target, image)


def _topDigit(tower, vertex):
    """Teichmuller lift of the last digit, checked against the quotient
    ([mu]_(n-1) - mu) / pi**(n-1), which must be its negative modulo pi.
    """
    n = vertex.n
    full = vertex.mu.value(tower)
    head = vertex.mu.truncate(n - 1).value(tower)
    quotient = tower.ofDivPi(tower.ofSub(head, full), n - 1)
    top = _digit(tower, vertex.mu.codes[-1])
    if not tower.ofIsZero(tower.ofResidue(tower.ofAdd(quotient, top))):
        raise RuntimeError("Truncation quotient of %s is not a Teichmuller digit" % vertex.label())
    return top


def _tMinusTerm(vertex, v, result):
    tower = v.tower
    w = KZElement.w(tower)
    if vertex.side == 0:
        if vertex.n == 0:
            result.addTerm(ALPHA_VERTEX, psiAlphaInv(v))
            return
        top = _topDigit(tower, vertex)
        image = actKZ(KZElement.unipotent(tower, top), psiAlphaInv(v))
    else:
        if vertex.n == 0:
            result.addTerm(BASE_VERTEX, actKZ(w, psiAlphaInv(actKZ(w, v))))
            return
        top = _topDigit(tower, vertex)
        image = actKZ(KZElement.wLambda(tower, tower.ofNeg(top)), psiAlphaInv(actKZ(w, v)))
    target = TreeVertex(vertex.side, vertex.n - 1, vertex.mu.truncate(vertex.n - 1))
    result.addTerm(target, image)


def tPlus(f):
    """Outward part of T: each term spawns q terms one level further out on
    the same side.
    """
    result = InducedFunction(f.profile)
    for vertex, vector in f.items():
        _tPlusTerm(vertex, vector, result)
    return result


def tMinus(f):
    """Inward part of T: each term moves one level towards the base edge;
    level-0 terms cross the base edge.
    """
    result = InducedFunction(f.profile)
    for vertex, vector in f.items():
        _tMinusTerm(vertex, vector, result)
    return result


def heckeT(f, satake=None):
    """T(f) = T+(f) + T-(f), or (T - a_p)(f) when ``satake`` is given.

    Parameters
    ----------
    f : `InducedFunction`
    satake : `SatakeData`, optional

    Returns
    -------
    image : `InducedFunction`
    """
    result = InducedFunction(f.profile)
    for vertex, vector in f.items():
        _tPlusTerm(vertex, vector, result)
        _tMinusTerm(vertex, vector, result)
    if satake is not None:
        result = result - f.scaled(satake.ap)
    return result


def _neighbourKernel(tower, vertex):
    """phi(vertexMatrix(vertex)) for the q + 1 neighbours of the base vertex,
    as a function of a lattice vector.
    """
    w = KZElement.w(tower)
    if vertex == ALPHA_VERTEX:
        return lambda v: actKZ(w, psiAlphaInv(actKZ(w, v)))
    if vertex.side == 0 and vertex.n == 1:
        unipotent = KZElement.unipotent(tower, _digit(tower, vertex.mu.codes[0]))
        return lambda v: actKZ(unipotent, psiAlphaInv(v))
    raise RuntimeError("Vertex %s is not adjacent to the base vertex" % vertex.label())


def heckeGeneric(f):
    """T(f) as the convolution sum over the q + 1 cosets x KZ in
    KZ alpha^-1 KZ / KZ, each inverse reduced to a neighbour of the base
    vertex times a KZ element.
    """
    tower = f.tower
    neighbours = enumerateSphere(0, 1, tower) + [ALPHA_VERTEX]
    steps = []
    for x in neighbours:
        xMatrix = vertexMatrix(x, tower)
        u, kz = cartanReduce(xMatrix.inverse())
        steps.append((xMatrix, _neighbourKernel(tower, u), kz))
    _LOG.debug("Convolving %d terms over %d neighbours of the base vertex", len(f), len(steps))
    result = InducedFunction(f.profile)
    for vertex, vector in f.items():
        g = vertexMatrix(vertex, tower)
        for xMatrix, kernel, kz in steps:
            image = kernel(actKZ(kz, vector))
            for target, value in fromPair(g @ xMatrix, image).terms.items():
                result.addTerm(target, value)
    return result


def isIntegralFn(f):
    """True if every stored vector is integral."""
    return f.isIntegral()
