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

__all__ = ["WeightProfile", "multinomial", "isBelow"]

import math

import numpy as np

from .exceptions import ComponentOutOfRangeError


def isBelow(j, i):
    """True if ``j <= i`` componentwise."""
    return len(j) == len(i) and all(a <= b for a, b in zip(j, i))


def multinomial(i, j):
    """Product of componentwise binomial coefficients binom(i_s, j_s).

    Raises
    ------
    ComponentOutOfRangeError
        Raised if ``j`` is not componentwise below ``i``.
    """
    if len(i) != len(j) or any(b < 0 for b in j) or not isBelow(j, i):
        raise ComponentOutOfRangeError("Multi-index %s is not below %s" % (tuple(j), tuple(i)))
    return math.prod(math.comb(a, b) for a, b in zip(i, j))


class WeightProfile:
    """A weight vector with one entry per embedding and its residue-class
    combinatorics.

    Parameters
    ----------
    tower : `lsst.padic.hecke.RingTower`
        Supplies the embedding table.
    d : sequence of `int`
        Nonnegative weights indexed by embedding.

    Notes
    -----
    ``J[l]`` holds the positive-weight embeddings whose Frobenius exponent
    on Teichmuller digits is ``l``; ``v[sigma]`` is the cyclic distance from
    the class of ``sigma`` to the next nonempty class, so ``v[sigma] = f``
    when only one class is occupied.
    """

    def __init__(self, tower, d):
        d = tuple(int(x) for x in d)
        if len(d) != tower.degree:
            raise ValueError("Weight vector %s needs e*f = %d entries" % (d, tower.degree))
        if any(x < 0 for x in d):
            raise ValueError("Weights must be nonnegative, got %s" % (d,))
        self.tower = tower
        self.d = d
        self.gamma = tuple(tower.gamma(index) for index in range(tower.degree))
        self.splus = tuple(index for index, weight in enumerate(d) if weight)
        self.J = {l: tuple(s for s in self.splus if self.gamma[s] == l) for l in range(tower.f)}
        self.v = {s: self._gap(self.gamma[s]) for s in self.splus}
        self.shape = tuple(weight + 1 for weight in d)
        self.dimension = math.prod(self.shape)
        self.cache = {}

    def _gap(self, l):
        f = self.tower.f
        for i in range(1, f + 1):
            if self.J[(l + i) % f]:
                return i
        return f

    def multiIndices(self):
        """All multi-indices below ``d`` in lexicographic order."""
        return list(np.ndindex(*self.shape))

    def occupiedClasses(self):
        return [l for l, members in self.J.items() if members]

    def table(self):
        """Printable rows (sigma, gamma, d, J-class, v)."""
        rows = []
        for s in range(self.tower.degree):
            rows.append({"sigma": s, "gamma": self.gamma[s], "d": self.d[s],
                         "jClass": self.gamma[s] if s in self.splus else None,
                         "v": self.v.get(s)})
        return rows

    def __repr__(self):
        return "WeightProfile(d=%s, p=%d, f=%d, e=%d)" % (self.d, self.tower.p, self.tower.f, self.tower.e)
