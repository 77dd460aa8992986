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

"""Shared fixtures for the padic_hecke tests."""

__all__ = ["makeTower", "makeProfile", "randomUnit", "randomIntegralVector", "randomKZ",
           "randomFunction", "ACCEPTANCE_TOWERS"]

import functools

import numpy as np

from lsst.padic.hecke import (EScalar, InducedFunction, KZElement, LatticeVector, RingTower,
                              WeightProfile, enumerateBall)

# (p, f, e) triples exercised by the oracle and structural tests.
ACCEPTANCE_TOWERS = [(2, 1, 1), (3, 1, 1), (3, 2, 1), (3, 1, 2), (5, 1, 1)]


@functools.lru_cache(maxsize=None)
def makeTower(p, f=1, e=1, precision=12):
    return RingTower.fromParameters(p, f, e, precision)


def makeProfile(p, f, e, d, precision=12):
    return WeightProfile(makeTower(p, f, e, precision), d)


def randomElement(tower, rng):
    return tuple(int(rng.randint(0, tower.p**3)) % tower.modulus for _ in range(tower.degree))


def randomUnit(tower, rng):
    """Random element of O_F whose residue is nonzero."""
    while True:
        x = randomElement(tower, rng)
        if tower.ofIsUnit(x):
            return x


def randomIntegralVector(profile, rng, bound=None):
    """Lattice vector with small random integer coefficients."""
    bound = profile.tower.p**2 if bound is None else bound
    coeffs = np.empty(profile.shape, dtype=object)
    for index in np.ndindex(*profile.shape):
        coeffs[index] = EScalar.fromInt(profile.tower, int(rng.randint(0, bound)))
    return LatticeVector(profile, coeffs)


def randomKZ(tower, rng):
    """Random element of GL_2(O_F)."""
    while True:
        entries = [randomElement(tower, rng) for _ in range(4)]
        a, b, c, d = entries
        if tower.ofIsUnit(tower.ofSub(tower.ofMul(a, d), tower.ofMul(b, c))):
            return KZElement(tower, entries)


def randomFunction(profile, rng, depth=1, terms=3):
    """Integral function with ``terms`` random terms in the ball of the given
    depth.
    """
    vertices = enumerateBall(depth, profile.tower)
    f = InducedFunction(profile)
    for _ in range(terms):
        vertex = vertices[rng.randint(0, len(vertices))]
        f.addTerm(vertex, randomIntegralVector(profile, rng))
    return f
