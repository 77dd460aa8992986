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

"""Tensor products of symmetric powers with their integral KZ-action.

The basis vector ``e_{d,i}`` of the factor of embedding sigma is the
monomial ``x**(d - i) * y**i``; a KZ element ``[[a, b], [c, d]]`` acts by
``x -> sigma(a) x + sigma(c) y`` and ``y -> sigma(b) x + sigma(d) y``, and
central powers of pi act trivially.
"""

__all__ = ["LatticeVector", "KZElement", "sigmaPi", "actKZ", "psiAlphaInv",
           "conjugatedStep", "isIntegralVec", "applyAlongAxis"]

import math

import numpy as np

from .exceptions import NotInvertibleError, PrecisionLossError
from .ringTower import EScalar


def applyAlongAxis(matrix, coeffs, axis):
    """Apply a square object matrix to one tensor axis of ``coeffs``."""
    moved = np.tensordot(matrix, coeffs, axes=([1], [axis]))
    return np.moveaxis(moved, 0, axis)


def _filled(shape, value):
    array = np.empty(shape, dtype=object)
    array.fill(value)
    return array


def sigmaPi(tower, index):
    """sigma(pi) as an `EScalar` (pi times a root of unity)."""
    return EScalar(tower, tower.embed(index, tower.uniformizer()))


class LatticeVector:
    """Vector of V = tensor of Sym^{d_sigma}, coefficients indexed by
    multi-indices in a dense object array of shape ``d + 1``.

    Parameters
    ----------
    profile : `lsst.padic.hecke.WeightProfile`
        Weights defining the ambient space.
    coeffs : `numpy.ndarray`, optional
        Object array of `EScalar`; exact zeros if None.
    """

    def __init__(self, profile, coeffs=None):
        self.profile = profile
        if coeffs is None:
            coeffs = _filled(profile.shape, EScalar.zero(profile.tower))
        elif coeffs.shape != profile.shape:
            raise ValueError("Coefficient array of shape %s does not match %s"
                             % (coeffs.shape, profile.shape))
        self.coeffs = coeffs

    @classmethod
    def basis(cls, profile, index, scalar=None):
        """``scalar * e_{d, index}``; ``scalar`` defaults to 1."""
        vector = cls(profile)
        if scalar is None:
            scalar = EScalar.one(profile.tower)
        vector.coeffs[tuple(index)] = scalar
        return vector

    @classmethod
    def fromDict(cls, profile, mapping):
        vector = cls(profile)
        for index, scalar in mapping.items():
            if not isinstance(scalar, EScalar):
                scalar = EScalar.fromInt(profile.tower, scalar)
            vector.coeffs[tuple(index)] = scalar
        return vector

    @property
    def tower(self):
        return self.profile.tower

    def __getitem__(self, index):
        return self.coeffs[tuple(index)]

    def items(self):
        """(multi-index, scalar) pairs in lexicographic order, exact zeros
        skipped.
        """
        for index in np.ndindex(*self.profile.shape):
            scalar = self.coeffs[index]
            if not scalar.isExactZero():
                yield index, scalar

    def __add__(self, other):
        return LatticeVector(self.profile, self.coeffs + other.coeffs)

    def __sub__(self, other):
        return LatticeVector(self.profile, self.coeffs - other.coeffs)

    def __neg__(self):
        return LatticeVector(self.profile, -self.coeffs)

    def scaled(self, scalar):
        if not isinstance(scalar, EScalar):
            scalar = EScalar.fromInt(self.tower, scalar)
        return LatticeVector(self.profile, self.coeffs*scalar)

    def isZero(self):
        """True if every coefficient is zero at its precision."""
        return all(scalar.isZero() for scalar in self.coeffs.flat)

    def isExactZero(self):
        return all(scalar.isExactZero() for scalar in self.coeffs.flat)

    def __eq__(self, other):
        if not isinstance(other, LatticeVector):
            return NotImplemented
        return (self - other).isZero()

    __hash__ = None

    def isIntegral(self):
        return all(scalar.isIntegral() for scalar in self.coeffs.flat)

    def isDivisibleByPi(self, k):
        return all(scalar.isDivisibleByPi(k) for scalar in self.coeffs.flat)

    def minPrecision(self):
        return min(scalar.absprec for scalar in self.coeffs.flat)

    def __repr__(self):
        entries = ", ".join("%s: %r" % (index, scalar) for index, scalar in self.items())
        return "LatticeVector({%s})" % entries


class KZElement:
    """Element pi**central * k of KZ with k in GL_2(O_F).

    Parameters
    ----------
    tower : `lsst.padic.hecke.RingTower`
    entries : `tuple`
        Raw elements ``(a, b, c, d)`` of O_F.
    central : `int`, optional
        Power of the central element pi.
    precision : `int`, optional
        Absolute precision of the entries in powers of pi.

    Raises
    ------
    NotInvertibleError
        Raised if the determinant is not a unit.
    """

    def __init__(self, tower, entries, central=0, precision=None):
        self.tower = tower
        self.entries = tuple(tuple(x) for x in entries)
        self.central = central
        self.precision = tower.cap if precision is None else min(precision, tower.cap)
        if self.precision < 1:
            raise PrecisionLossError("KZ element known modulo pi^%d cannot be certified invertible"
                                     % self.precision)
        a, b, c, d = self.entries
        if not tower.ofIsUnit(tower.ofSub(tower.ofMul(a, d), tower.ofMul(b, c))):
            raise NotInvertibleError("Matrix %s is not in GL_2(O_F)" % (self.entries,))

    @classmethod
    def identity(cls, tower):
        return cls(tower, (tower.ofOne(), tower.ofZero(), tower.ofZero(), tower.ofOne()))

    @classmethod
    def w(cls, tower):
        return cls(tower, (tower.ofZero(), tower.ofOne(), tower.ofOne(), tower.ofZero()))

    @classmethod
    def wLambda(cls, tower, lam):
        """[[0, 1], [1, -lam]]."""
        return cls(tower, (tower.ofZero(), tower.ofOne(), tower.ofOne(), tower.ofNeg(lam)))

    @classmethod
    def unipotent(cls, tower, t):
        """[[1, t], [0, 1]]."""
        return cls(tower, (tower.ofOne(), tuple(t), tower.ofZero(), tower.ofOne()))

    @classmethod
    def lowerUnipotent(cls, tower, t):
        """[[1, 0], [t, 1]]."""
        return cls(tower, (tower.ofOne(), tower.ofZero(), tuple(t), tower.ofOne()))

    @classmethod
    def diagonal(cls, tower, a, d):
        return cls(tower, (tuple(a), tower.ofZero(), tower.ofZero(), tuple(d)))

    def __mul__(self, other):
        t = self.tower
        a1, b1, c1, d1 = self.entries
        a2, b2, c2, d2 = other.entries
        entries = (t.ofAdd(t.ofMul(a1, a2), t.ofMul(b1, c2)),
                   t.ofAdd(t.ofMul(a1, b2), t.ofMul(b1, d2)),
                   t.ofAdd(t.ofMul(c1, a2), t.ofMul(d1, c2)),
                   t.ofAdd(t.ofMul(c1, b2), t.ofMul(d1, d2)))
        return KZElement(t, entries, self.central + other.central, min(self.precision, other.precision))

    def __repr__(self):
        return "KZElement(%s, central=%d, precision=%d)" % (
            [self.tower.ofToList(x) for x in self.entries], self.central, self.precision)


def _polyMul(tower, left, right):
    result = [tower.ofZero()]*(len(left) + len(right) - 1)
    for i, x in enumerate(left):
        if not any(x):
            continue
        for j, y in enumerate(right):
            if any(y):
                result[i + j] = tower.ofAdd(result[i + j], tower.ofMul(x, y))
    return result


def _linearPowers(tower, constant, slope, degree):
    powers = [[tower.ofOne()]]
    for _ in range(degree):
        powers.append(_polyMul(tower, powers[-1], [constant, slope]))
    return powers


def _kzAxisMatrix(k, index, degree):
    tower = k.tower
    a, b, c, d = (tower.embed(index, x) for x in k.entries)
    first = _linearPowers(tower, a, c, degree)
    second = _linearPowers(tower, b, d, degree)
    matrix = np.empty((degree + 1, degree + 1), dtype=object)
    for i in range(degree + 1):
        column = _polyMul(tower, first[degree - i], second[i])
        for j in range(degree + 1):
            matrix[j, i] = EScalar(tower, column[j], 0, k.precision)
    return matrix


def actKZ(k, v, profile=None):
    """Action of a KZ element on a lattice vector.

    Parameters
    ----------
    k : `KZElement`
    v : `LatticeVector`
    profile : `lsst.padic.hecke.WeightProfile`, optional
        Defaults to the profile of ``v``.

    Returns
    -------
    image : `LatticeVector`
    """
    profile = v.profile if profile is None else profile
    coeffs = v.coeffs
    for index, degree in enumerate(profile.d):
        if degree:
            coeffs = applyAlongAxis(_kzAxisMatrix(k, index, degree), coeffs, index)
    return LatticeVector(profile, coeffs)


def _psiScales(profile):
    scales = profile.cache.get("psi")
    if scales is None:
        tower = profile.tower
        pis = [sigmaPi(tower, index) for index in range(tower.degree)]
        scales = np.empty(profile.shape, dtype=object)
        for index in np.ndindex(*profile.shape):
            scalar = EScalar.one(tower)
            for s, (weight, i) in enumerate(zip(profile.d, index)):
                if weight - i:
                    scalar = scalar*pis[s]**(weight - i)
            scales[index] = scalar
        profile.cache["psi"] = scales
    return scales


def psiAlphaInv(v, profile=None):
    """Diagonal operator scaling e_{d,i} by the product of
    sigma(pi)**(d_sigma - i_sigma).
    """
    profile = v.profile if profile is None else profile
    return LatticeVector(profile, v.coeffs*_psiScales(profile))


def _conjugatedAxisMatrix(tower, index, degree, lam):
    piSigma = sigmaPi(tower, index)
    negLambda = EScalar(tower, tower.embed(index, tower.ofNeg(lam)))
    matrix = _filled((degree + 1, degree + 1), EScalar.zero(tower))
    for i in range(degree + 1):
        for j in range(i + 1):
            matrix[j, i] = EScalar.fromInt(tower, math.comb(i, j))*piSigma**j*negLambda**(i - j)
    return matrix


def conjugatedStep(v, lam, profile=None):
    """rho(w) o psi(alpha^-1) o rho(w_lam) in closed form: the coefficient at
    j is pi^j times the sum over i >= j of c_i binom(i, j) (-lam)^(i - j).

    Parameters
    ----------
    v : `LatticeVector`
    lam : `tuple`
        Raw element of O_F, normally a Teichmuller digit.
    """
    profile = v.profile if profile is None else profile
    tower = profile.tower
    coeffs = v.coeffs
    for index, degree in enumerate(profile.d):
        if degree:
            coeffs = applyAlongAxis(_conjugatedAxisMatrix(tower, index, degree, lam), coeffs, index)
    return LatticeVector(profile, coeffs)


def isIntegralVec(v):
    """True if every coefficient has certified nonnegative valuation."""
    return v.isIntegral()
