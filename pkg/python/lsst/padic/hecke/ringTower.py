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

"""Exact fixed-precision arithmetic for the tower GF(q), O_F0, O_F, O_E.

The unramified ring O_F0 is Z_p[x]/(H) truncated modulo p**M, where H is
the monic integer lift of an irreducible h over GF(p). The ramified ring
O_F is O_F0[y]/(y**e - p), with e dividing q - 1 when e > 1, and the
coefficient ring O_E is taken to be the same ring, so every embedding
sigma = (gamma, j) acts by the Frobenius power gamma on coefficients and
sends y to zeta**j * y with zeta a primitive e-th root of unity.

Raw elements are plain tuples of integers:

- residue field: ``f`` integers modulo p;
- O_F0: ``f`` integers modulo p**M;
- O_F and O_E: ``e*f`` integers modulo p**M, entry ``k*f + i`` holding the
  coefficient of ``y**k * x**i``.

Valuations reported to users are in the normalization val_F(p) = e*f, so
val_F(pi) = f. Internally precisions are counted in powers of pi.
"""

__all__ = ["RingTowerConfig", "RingTower", "Valuation", "EScalar",
           "isIrreducibleMod", "firstIrreduciblePolynomial",
           "teichmuller", "frobenius", "embed", "valuation", "powerMultiIndex"]

import math
from dataclasses import dataclass
from typing import Optional

from sympy import isprime, primefactors
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_gcd, gf_pow_mod, gf_rem, gf_sub

import lsst.pex.config as pexConfig
from lsst.utils.logging import getLogger

from .exceptions import ConfigInvalidError, NotInvertibleError, PrecisionLossError

_LOG = getLogger(__name__)

# Newton and fixed-point loops converge long before this.
_MAX_ITERATIONS = 256


def isIrreducibleMod(coeffs, p):
    """Test a monic polynomial for irreducibility over GF(p).

    Parameters
    ----------
    coeffs : `list` of `int`
        Little-endian coefficients, leading coefficient last.
    p : `int`
        The prime.

    Returns
    -------
    irreducible : `bool`
        True if gcd(x**(p**k) - x, h) = 1 for 0 < k < deg h and
        x**(p**deg h) = x modulo h.
    """
    degree = len(coeffs) - 1
    if degree < 1 or coeffs[-1] % p != 1:
        return False
    h = [int(c) % p for c in reversed(coeffs)]
    x = [1, 0]
    for k in range(1, degree):
        xpk = gf_pow_mod(x, p**k, h, p, ZZ)
        if gf_gcd(gf_sub(xpk, x, p, ZZ), h, p, ZZ) != [1]:
            return False
    xq = gf_pow_mod(x, p**degree, h, p, ZZ)
    return not gf_sub(xq, gf_rem(x, h, p, ZZ), p, ZZ)


def firstIrreduciblePolynomial(p, f):
    """Return the monic irreducible polynomial of degree ``f`` over GF(p)
    whose lower coefficients have the smallest little-endian encoding.
    """
    for code in range(p**f):
        low = [(code // p**i) % p for i in range(f)]
        if isIrreducibleMod(low + [1], p):
            return tuple(low + [1])
    raise ConfigInvalidError("No irreducible polynomial of degree %d over GF(%d)" % (f, p))


def _parseEmbedding(text):
    try:
        gamma, j = (int(part) for part in text.split(","))
    except ValueError:
        raise ConfigInvalidError("Embedding descriptor %r is not of the form 'gamma,j'" % (text,))
    return gamma, j


class RingTowerConfig(pexConfig.Config):
    """Parameters of the ring tower."""
    p = pexConfig.Field(
        dtype=int,
        default=3,
        doc="Residue characteristic; must be prime.",
        check=lambda x: x >= 2,
    )
    f = pexConfig.Field(
        dtype=int,
        default=1,
        doc="Residue degree; the residue field has q = p**f elements.",
        check=lambda x: x >= 1,
    )
    e = pexConfig.Field(
        dtype=int,
        default=1,
        doc="Ramification index; the uniformizer y satisfies y**e = p.",
        check=lambda x: x >= 1,
    )
    hCoeffs = pexConfig.ListField(
        dtype=int,
        default=None,
        optional=True,
        doc="Little-endian coefficients of the monic irreducible h defining GF(q), "
            "leading 1 included. If None, the irreducible polynomial with the smallest "
            "encoding is used.",
    )
    precision = pexConfig.Field(
        dtype=int,
        default=12,
        doc="Working precision M: unramified coefficients are kept modulo p**M.",
        check=lambda x: x >= 2,
    )
    embeddings = pexConfig.ListField(
        dtype=str,
        default=None,
        optional=True,
        doc="Embedding table as 'gamma,j' strings, e*f distinct entries with 0 <= gamma < f "
            "and 0 <= j < e. Entry 0 is the distinguished embedding. If None, gamma runs "
            "outermost.",
    )

    def validate(self):
        super().validate()
        p, f, e = self.p, self.f, self.e
        if not isprime(p):
            raise ConfigInvalidError("p = %d is not prime" % p)
        q = p**f
        if self.hCoeffs is not None:
            h = list(self.hCoeffs)
            if len(h) != f + 1:
                raise ConfigInvalidError("hCoeffs must have f + 1 = %d entries, got %d" % (f + 1, len(h)))
            if not isIrreducibleMod(h, p):
                raise ConfigInvalidError("h = %s is not monic irreducible over GF(%d)" % (h, p))
        if e > 1 and (q - 1) % e != 0:
            raise ConfigInvalidError("e = %d does not divide q - 1 = %d" % (e, q - 1))
        if self.embeddings is not None:
            table = [_parseEmbedding(text) for text in self.embeddings]
            if len(table) != e*f:
                raise ConfigInvalidError("Embedding table needs e*f = %d entries, got %d" % (e*f, len(table)))
            if len(set(table)) != len(table):
                raise ConfigInvalidError("Embedding table entries must be distinct")
            for gamma, j in table:
                if not (0 <= gamma < f and 0 <= j < e):
                    raise ConfigInvalidError("Embedding (%d, %d) out of range" % (gamma, j))


@dataclass(frozen=True)
class Valuation:
    """A valuation that is either certified, bounded below, or infinite.

    ``kind`` is one of ``"finite"``, ``"atLeast"`` or ``"infinite"``.
    """
    kind: str
    value: Optional[int] = None

    @classmethod
    def finite(cls, v):
        return cls("finite", int(v))

    @classmethod
    def atLeast(cls, cap):
        return cls("atLeast", int(cap))

    @classmethod
    def infinite(cls):
        return cls("infinite")

    def isFinite(self):
        return self.kind == "finite"

    def isInfinite(self):
        return self.kind == "infinite"

    def scaled(self, factor):
        if self.kind == "infinite":
            return self
        return Valuation(self.kind, self.value*factor)

    def __add__(self, other):
        if self.isInfinite() or other.isInfinite():
            return Valuation.infinite()
        if self.isFinite() and other.isFinite():
            return Valuation.finite(self.value + other.value)
        return Valuation.atLeast(self.value + other.value)

    def __str__(self):
        if self.kind == "finite":
            return "Finite(%d)" % self.value
        if self.kind == "atLeast":
            return "AtLeast(%d)" % self.value
        return "Infinite"

    def toDict(self):
        return {"kind": self.kind, "value": self.value}


class RingTower:
    """Exact arithmetic in GF(q), O_F0, O_F and O_E at precision p**M.

    Parameters
    ----------
    config : `RingTowerConfig`
        Validated on construction.
    """

    def __init__(self, config):
        config.validate()
        self.p = config.p
        self.f = config.f
        self.e = config.e
        self.precision = config.precision
        self.q = self.p**self.f
        self.modulus = self.p**self.precision
        self.degree = self.e*self.f
        # Absolute precision of raw elements, in powers of pi.
        self.cap = self.e*self.precision
        if config.hCoeffs is None:
            self.hCoeffs = firstIrreduciblePolynomial(self.p, self.f)
        else:
            self.hCoeffs = tuple(int(c) for c in config.hCoeffs)
        if config.embeddings is None:
            self.embeddings = tuple((gamma, j) for gamma in range(self.f) for j in range(self.e))
        else:
            self.embeddings = tuple(_parseEmbedding(text) for text in config.embeddings)

        self._fqTable = self._makeReduction(self.p)
        self._zqTable = self._makeReduction(self.modulus)
        self._teichmullerCache = {}
        self._zetaPowers = {}
        self._fqElements = [self.fqDecode(code) for code in range(self.q)]
        self.generator = self._findGenerator()
        self._frobeniusTable = self._makeFrobeniusTable()
        self.zetaE = self.teichmullerZq(self.fqPow(self.generator, (self.q - 1)//self.e))
        _LOG.debug("Built ring tower p=%d f=%d e=%d M=%d with h=%s", self.p, self.f, self.e,
                   self.precision, self.hCoeffs)

    @classmethod
    def fromParameters(cls, p, f=1, e=1, precision=12, hCoeffs=None, embeddings=None):
        """Build a tower without writing a config by hand."""
        config = RingTowerConfig()
        config.p = p
        config.f = f
        config.e = e
        config.precision = precision
        if hCoeffs is not None:
            config.hCoeffs = list(hCoeffs)
        if embeddings is not None:
            config.embeddings = ["%d,%d" % tuple(entry) for entry in embeddings]
        return cls(config)

    def summary(self):
        return {"p": self.p, "f": self.f, "e": self.e, "precision": self.precision,
                "hCoeffs": list(self.hCoeffs),
                "embeddings": ["%d,%d" % entry for entry in self.embeddings]}

    # Polynomial arithmetic modulo h (residue field) or H (unramified ring)

    def _makeReduction(self, modulus):
        f = self.f
        h = self.hCoeffs
        current = tuple((-h[i]) % modulus for i in range(f))
        table = [current]
        for _ in range(f, 2*f - 2):
            top = current[-1]
            shifted = (0,) + current[:-1]
            current = tuple((shifted[i] - top*h[i]) % modulus for i in range(f))
            table.append(current)
        return table

    def _polyMul(self, a, b, modulus, table):
        f = self.f
        product = [0]*(2*f - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    product[i + j] += ai*bj
        result = product[:f]
        for k in range(f, 2*f - 1):
            c = product[k]
            if c:
                row = table[k - f]
                for i in range(f):
                    result[i] += c*row[i]
        return tuple(r % modulus for r in result)

    # Residue field GF(q)

    def fqDecode(self, code):
        """Residue field element with polynomial-basis encoding ``code``."""
        return tuple((code // self.p**i) % self.p for i in range(self.f))

    def fqEncode(self, x):
        return sum(c*self.p**i for i, c in enumerate(x))

    def fqElements(self):
        """All residue field elements in encoding order."""
        return list(self._fqElements)

    def fqZero(self):
        return (0,)*self.f

    def fqOne(self):
        return (1,) + (0,)*(self.f - 1)

    def fqIsZero(self, x):
        return not any(x)

    def fqAdd(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def fqSub(self, a, b):
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def fqNeg(self, a):
        return tuple((-x) % self.p for x in a)

    def fqMul(self, a, b):
        return self._polyMul(a, b, self.p, self._fqTable)

    def fqPow(self, a, n):
        result = self.fqOne()
        base = a
        while n > 0:
            if n & 1:
                result = self.fqMul(result, base)
            base = self.fqMul(base, base)
            n >>= 1
        return result

    def fqInverse(self, a):
        if self.fqIsZero(a):
            raise NotInvertibleError("Zero has no inverse in GF(%d)" % self.q)
        return self.fqPow(a, self.q - 2)

    def _findGenerator(self):
        primes = primefactors(self.q - 1)
        one = self.fqOne()
        for code in range(1, self.q):
            candidate = self.fqDecode(code)
            if all(self.fqPow(candidate, (self.q - 1)//ell) != one for ell in primes):
                return candidate
        raise RuntimeError("GF(%d) has no generator; h is not irreducible" % self.q)

    # Unramified ring O_F0

    def zqZero(self):
        return (0,)*self.f

    def zqOne(self):
        return (1,) + (0,)*(self.f - 1)

    def zqFromInt(self, n):
        return (n % self.modulus,) + (0,)*(self.f - 1)

    def zqAdd(self, a, b):
        return tuple((x + y) % self.modulus for x, y in zip(a, b))

    def zqSub(self, a, b):
        return tuple((x - y) % self.modulus for x, y in zip(a, b))

    def zqScale(self, a, n):
        return tuple((n*x) % self.modulus for x in a)

    def zqMul(self, a, b):
        return self._polyMul(a, b, self.modulus, self._zqTable)

    def zqPow(self, a, n):
        result = self.zqOne()
        base = a
        while n > 0:
            if n & 1:
                result = self.zqMul(result, base)
            base = self.zqMul(base, base)
            n >>= 1
        return result

    def zqResidue(self, a):
        return tuple(c % self.p for c in a)

    def zqInverse(self, u):
        residue = self.zqResidue(u)
        if self.fqIsZero(residue):
            raise NotInvertibleError("Element %s of O_F0 is not a unit" % (u,))
        t = tuple(self.fqInverse(residue))
        two = self.zqFromInt(2)
        for _ in range(_MAX_ITERATIONS):
            refined = self.zqMul(t, self.zqSub(two, self.zqMul(u, t)))
            if refined == t:
                return t
            t = refined
        raise RuntimeError("Newton inversion did not converge")

    def teichmullerZq(self, x):
        """Teichmuller lift of a residue field element into O_F0."""
        x = tuple(x)
        cached = self._teichmullerCache.get(x)
        if cached is not None:
            return cached
        t = tuple(x)
        for _ in range(_MAX_ITERATIONS):
            raised = self.zqPow(t, self.q)
            if raised == t:
                break
            t = raised
        else:
            raise RuntimeError("Teichmuller iteration did not stabilize")
        self._teichmullerCache[x] = t
        return t

    def _evalLift(self, z, coeffs):
        result = self.zqZero()
        for c in reversed(coeffs):
            result = self.zqAdd(self.zqMul(result, z), self.zqFromInt(c))
        return result

    def _makeFrobeniusTable(self):
        f = self.f
        if f == 1:
            return [[self.zqOne()]]
        x = (0, 1) + (0,)*(f - 2)
        derivative = [i*c for i, c in enumerate(self.hCoeffs)][1:]
        root = self.zqPow(x, self.p)
        for _ in range(_MAX_ITERATIONS):
            value = self._evalLift(root, self.hCoeffs)
            if not any(value):
                break
            step = self.zqMul(value, self.zqInverse(self._evalLift(root, derivative)))
            root = self.zqSub(root, step)
        else:
            raise RuntimeError("Frobenius root did not converge")
        rootPowers = [self.zqPow(root, i) for i in range(f)]

        def applyOnce(z):
            result = self.zqZero()
            for zi, power in zip(z, rootPowers):
                result = self.zqAdd(result, self.zqScale(power, zi))
            return result

        images = [x]
        for _ in range(1, f):
            images.append(applyOnce(images[-1]))
        return [[self.zqPow(image, i) for i in range(f)] for image in images]

    def frobeniusZq(self, z, times=1):
        """Apply the Frobenius ``times`` times to an element of O_F0."""
        table = self._frobeniusTable[times % self.f]
        result = self.zqZero()
        for zi, power in zip(z, table):
            if zi:
                result = self.zqAdd(result, self.zqScale(power, zi))
        return result

    # O_F = O_E

    def _blocks(self, x):
        f = self.f
        return [tuple(x[k*f:(k + 1)*f]) for k in range(self.e)]

    def ofZero(self):
        return (0,)*self.degree

    def ofOne(self):
        return (1,) + (0,)*(self.degree - 1)

    def ofFromInt(self, n):
        return (n % self.modulus,) + (0,)*(self.degree - 1)

    def ofFromZq(self, z):
        return tuple(z) + (0,)*(self.degree - self.f)

    def uniformizer(self):
        """The class of y, which is p when e = 1."""
        if self.e == 1:
            return self.ofFromInt(self.p)
        return (0,)*self.f + (1,) + (0,)*(self.degree - self.f - 1)

    def ofIsZero(self, x):
        return not any(x)

    def ofAdd(self, a, b):
        return tuple((x + y) % self.modulus for x, y in zip(a, b))

    def ofSub(self, a, b):
        return tuple((x - y) % self.modulus for x, y in zip(a, b))

    def ofNeg(self, a):
        return tuple((-x) % self.modulus for x in a)

    def ofScale(self, a, n):
        return tuple((n*x) % self.modulus for x in a)

    def ofMul(self, a, b):
        if self.e == 1:
            return self.zqMul(a, b)
        e, f = self.e, self.f
        blocksA = self._blocks(a)
        blocksB = self._blocks(b)
        accumulator = [[0]*f for _ in range(e)]
        for k, ak in enumerate(blocksA):
            if not any(ak):
                continue
            for m, bm in enumerate(blocksB):
                if not any(bm):
                    continue
                product = self.zqMul(ak, bm)
                target = k + m
                scale = 1
                if target >= e:
                    target -= e
                    scale = self.p
                row = accumulator[target]
                for i in range(f):
                    row[i] += scale*product[i]
        return tuple(c % self.modulus for row in accumulator for c in row)

    def ofPow(self, a, n):
        result = self.ofOne()
        base = a
        while n > 0:
            if n & 1:
                result = self.ofMul(result, base)
            base = self.ofMul(base, base)
            n >>= 1
        return result

    def _vp(self, n):
        count = 0
        while n % self.p == 0:
            n //= self.p
            count += 1
        return count

    def ofOrd(self, x):
        """Order of ``x`` in powers of pi, or None if ``x`` is zero modulo
        p**M.
        """
        best = None
        for k, block in enumerate(self._blocks(x)):
            nonzero = [c for c in block if c]
            if not nonzero:
                continue
            order = self.e*min(self._vp(c) for c in nonzero) + k
            if best is None or order < best:
                best = order
        return best

    def ofMulPi(self, x, k=1):
        if k >= self.cap:
            return self.ofZero()
        f = self.f
        for _ in range(k):
            top = x[(self.e - 1)*f:]
            x = tuple((self.p*c) % self.modulus for c in top) + tuple(x[:(self.e - 1)*f])
        return x

    def ofDivPi(self, x, k=1):
        """Exact division by pi**k; the top digit of the result is
        undetermined and left as the canonical representative.
        """
        f = self.f
        for _ in range(k):
            low = x[:f]
            if any(c % self.p for c in low):
                raise ValueError("Element %s is not divisible by pi" % (x,))
            x = tuple(x[f:]) + tuple(c//self.p for c in low)
        return x

    def ofReduce(self, x, relprec):
        """Canonical representative of ``x`` modulo pi**relprec."""
        if relprec >= self.cap:
            return tuple(x)
        e, f = self.e, self.f
        result = []
        for k, block in enumerate(self._blocks(x)):
            exponent = max(0, -(-(relprec - k)//e))
            modulus = self.p**min(exponent, self.precision)
            result.extend(c % modulus for c in block)
        return tuple(result)

    def ofResidue(self, x):
        return tuple(c % self.p for c in x[:self.f])

    def ofIsUnit(self, x):
        return not self.fqIsZero(self.ofResidue(x))

    def ofInverse(self, u):
        residue = self.ofResidue(u)
        if self.fqIsZero(residue):
            raise NotInvertibleError("Element %s of O_F is not a unit" % (u,))
        t = self.ofFromZq(self.fqInverse(residue))
        two = self.ofFromInt(2)
        for _ in range(_MAX_ITERATIONS):
            refined = self.ofMul(t, self.ofSub(two, self.ofMul(u, t)))
            if refined == t:
                return t
            t = refined
        raise RuntimeError("Newton inversion did not converge")

    def ofTeichmuller(self, x):
        return self.ofFromZq(self.teichmullerZq(x))

    def ofDigits(self, x, n):
        """Teichmuller digits of ``x`` modulo pi**n.

        Returns
        -------
        digits : `list` of residue field elements
            ``mu_0, ..., mu_{n-1}``.
        remainder : `tuple`
            ``t`` with ``x = sum pi**i [mu_i] + pi**n t`` exactly.
        """
        digits = []
        remainder = tuple(x)
        for _ in range(n):
            digit = self.ofResidue(remainder)
            digits.append(digit)
            remainder = self.ofDivPi(self.ofSub(remainder, self.ofTeichmuller(digit)))
        return digits, remainder

    def ofFrobenius(self, x, times=1):
        return tuple(c for block in self._blocks(x) for c in self.frobeniusZq(block, times))

    def _zetaPower(self, m):
        m %= self.e
        power = self._zetaPowers.get(m)
        if power is None:
            power = self.zqPow(self.zetaE, m)
            self._zetaPowers[m] = power
        return power

    def embed(self, index, x):
        """Image of ``x`` under the embedding with the given table index."""
        if not 0 <= index < self.degree:
            raise IndexError("Embedding index %d out of range [0, %d)" % (index, self.degree))
        gamma, j = self.embeddings[index]
        result = []
        for k, block in enumerate(self._blocks(x)):
            image = self.frobeniusZq(block, gamma) if gamma else block
            if j and k:
                image = self.zqMul(image, self._zetaPower(j*k))
            result.extend(image)
        return tuple(result)

    def gamma(self, index):
        """Frobenius exponent of an embedding on Teichmuller digits."""
        return self.embeddings[index][0]

    def ofToList(self, x):
        return [list(block) for block in self._blocks(x)]

    def ofFromList(self, data):
        """Inverse of `ofToList`; raises `ValueError` on a shape mismatch."""
        if len(data) != self.e or any(len(block) != self.f for block in data):
            raise ValueError("Expected %d blocks of %d digits, got %r" % (self.e, self.f, data))
        return tuple(int(c) % self.modulus for block in data for c in block)


class EScalar:
    """An element pi**exponent * unit of the coefficient field E known
    modulo pi**absprec.

    Parameters
    ----------
    tower : `RingTower`
        Ring the mantissa lives in.
    mantissa : `tuple`
        Raw element of O_E.
    exponent : `int`, optional
        Power of pi multiplying the mantissa.
    absprec : `int` or `float`, optional
        Absolute precision in powers of pi. None means the mantissa is exact
        data: a nonzero mantissa then carries its full precision and a zero
        mantissa is an exact zero.
    """
    __slots__ = ("tower", "exponent", "unit", "absprec")

    def __init__(self, tower, mantissa, exponent=0, absprec=None):
        self.tower = tower
        nonzero = any(mantissa)
        if absprec is None and not nonzero:
            self._setZero(math.inf)
            return
        limit = exponent + tower.cap
        absprec = limit if absprec is None else min(absprec, limit)
        order = tower.ofOrd(mantissa) if nonzero else None
        if order is None or exponent + order >= absprec:
            self._setZero(absprec)
            return
        unit = tower.ofDivPi(tuple(mantissa), order) if order else tuple(mantissa)
        self.exponent = exponent + order
        self.absprec = absprec
        self.unit = tower.ofReduce(unit, absprec - self.exponent)

    def _setZero(self, absprec):
        self.unit = None
        self.exponent = 0
        self.absprec = absprec

    @classmethod
    def zero(cls, tower, absprec=math.inf):
        """Zero known modulo pi**absprec (exact by default)."""
        scalar = cls.__new__(cls)
        scalar.tower = tower
        scalar._setZero(absprec)
        return scalar

    @classmethod
    def one(cls, tower):
        return cls(tower, tower.ofOne())

    @classmethod
    def fromInt(cls, tower, n):
        n = int(n)
        if n == 0:
            return cls.zero(tower)
        a = 0
        while n % tower.p == 0:
            n //= tower.p
            a += 1
        return cls(tower, tower.ofFromInt(n), tower.e*a)

    @classmethod
    def pi(cls, tower, k=1):
        """pi**k for any integer k."""
        return cls(tower, tower.ofOne(), k)

    def isZero(self):
        """True if the value is zero at its precision."""
        return self.unit is None

    def isExactZero(self):
        return self.unit is None and self.absprec == math.inf

    def ordPi(self):
        """Valuation in powers of pi."""
        if self.unit is None:
            if self.absprec == math.inf:
                return Valuation.infinite()
            return Valuation.atLeast(self.absprec)
        return Valuation.finite(self.exponent)

    def valuation(self):
        """Valuation in the normalization val_F(p) = e*f."""
        return self.ordPi().scaled(self.tower.f)

    def _lower(self):
        return self.absprec if self.unit is None else self.exponent

    def _coerce(self, other):
        if isinstance(other, EScalar):
            return other
        if isinstance(other, int):
            return EScalar.fromInt(self.tower, other)
        return NotImplemented

    def withPrecision(self, absprec):
        """Copy with absolute precision lowered to ``absprec``."""
        if absprec >= self.absprec:
            return self
        if self.unit is None:
            return EScalar.zero(self.tower, absprec)
        return EScalar(self.tower, self.unit, self.exponent, absprec)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        absprec = min(self.absprec, other.absprec)
        if self.unit is None:
            return other.withPrecision(absprec)
        if other.unit is None:
            return self.withPrecision(absprec)
        tower = self.tower
        k = min(self.exponent, other.exponent)
        mantissa = tower.ofAdd(tower.ofMulPi(self.unit, self.exponent - k),
                               tower.ofMulPi(other.unit, other.exponent - k))
        return EScalar(tower, mantissa, k, absprec)

    __radd__ = __add__

    def __neg__(self):
        if self.unit is None:
            return self
        return EScalar(self.tower, self.tower.ofNeg(self.unit), self.exponent, self.absprec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        tower = self.tower
        if self.isExactZero() or other.isExactZero():
            return EScalar.zero(tower)
        absprec = min(self.absprec + other._lower(), other.absprec + self._lower())
        if self.unit is None or other.unit is None:
            return EScalar.zero(tower, absprec)
        return EScalar(tower, tower.ofMul(self.unit, other.unit), self.exponent + other.exponent, absprec)

    __rmul__ = __mul__

    def inverse(self):
        if self.unit is None:
            if self.absprec == math.inf:
                raise NotInvertibleError("Zero has no inverse")
            raise PrecisionLossError("Cannot certify a nonzero value modulo pi^%d" % self.absprec)
        k = self.exponent
        return EScalar(self.tower, self.tower.ofInverse(self.unit), -k, self.absprec - 2*k)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.isExactZero():
            other.inverse()
            return self
        return self*other.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse()**(-n)
        result = EScalar.one(self.tower)
        for _ in range(n):
            result = result*self
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).isZero()

    __hash__ = None

    def isIntegral(self):
        """True if the valuation is certified nonnegative."""
        return self.isDivisibleByPi(0)

    def isDivisibleByPi(self, k):
        """True if the valuation is at least ``k`` powers of pi; raises
        `PrecisionLossError` when the precision cannot decide.
        """
        if self.unit is not None:
            return self.exponent >= k
        if self.absprec >= k:
            return True
        raise PrecisionLossError("Value zero modulo pi^%s cannot be certified divisible by pi^%d"
                                 % (self.absprec, k))

    def __repr__(self):
        if self.unit is None:
            return "EScalar(0, absprec=%s)" % self.absprec
        return "EScalar(pi^%d * %s, absprec=%s)" % (self.exponent, self.tower.ofToList(self.unit),
                                                   self.absprec)


def teichmuller(x, tower):
    """Teichmuller lift of a residue field element into O_F0."""
    return tower.teichmullerZq(x)


def frobenius(x, tower, times=1):
    """Frobenius automorphism of O_F0 lifting lambda -> lambda**p."""
    return tower.frobeniusZq(x, times)


def embed(index, x, tower):
    """Image of an element of O_F under an embedding into O_E."""
    return tower.embed(index, x)


def valuation(x):
    """Normalized valuation of an `EScalar`."""
    return x.valuation()


def powerMultiIndex(z, n, tower):
    """Product over embeddings of sigma(z)**n_sigma, as a raw element of O_E.
    """
    if len(n) != tower.degree:
        raise ValueError("Multi-index %s needs %d entries" % (tuple(n), tower.degree))
    result = tower.ofOne()
    for index, exponent in enumerate(n):
        if exponent:
            result = tower.ofMul(result, tower.ofPow(tower.embed(index, z), exponent))
    return result
