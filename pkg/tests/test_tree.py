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

import unittest

import numpy as np

import lsst.utils.tests
from lsst.padic.hecke import (ALPHA_VERTEX, BASE_VERTEX, DigitString, GMatrix, PrecisionLossError,
                              TreeVertex, cartanReduce, children, distanceFromBase, enumerateBall,
                              enumerateSphere, makeTreeDot, parent, truncate, vertexMatrix)

from utils import makeTower, randomKZ


class VertexTest(lsst.utils.tests.TestCase):
    """Canonical coset representatives and their enumeration."""

    def testBaseMatrices(self):
        tower = makeTower(3)
        base = vertexMatrix(BASE_VERTEX, tower)
        self.assertEqual(base.entries, GMatrix.identity(tower).entries)
        self.assertEqual(vertexMatrix(ALPHA_VERTEX, tower).entries, GMatrix.alpha(tower).entries)

    def testCounts(self):
        for p, f in [(2, 1), (3, 1), (2, 2)]:
            tower = makeTower(p, f)
            q = tower.q
            for n in range(3):
                self.assertEqual(len(enumerateSphere(0, n, tower)), q**n)
                self.assertEqual(len(enumerateBall(n, tower)), 2*(q**(n + 1) - 1)//(q - 1))

    def testOrdering(self):
        tower = makeTower(2)
        ball = enumerateBall(1, tower)
        self.assertEqual(ball[:2], [BASE_VERTEX, ALPHA_VERTEX])
        self.assertEqual(ball, sorted(ball))
        self.assertEqual([vertex.label() for vertex in ball[2:4]], ["0,1,[0]", "0,1,[1]"])

    def testValidation(self):
        with self.assertRaises(ValueError):
            TreeVertex(2, 0)
        with self.assertRaises(ValueError):
            TreeVertex(0, 1)

    def testTruncate(self):
        mu = DigitString((1, 2, 0))
        self.assertEqual(truncate(mu, 2), DigitString((1, 2)))
        self.assertEqual(truncate(mu, 0), DigitString())
        with self.assertRaises(IndexError):
            truncate(mu, 4)

    def testDigitValue(self):
        tower = makeTower(3)
        # [1] + 3 [2] = 1 - 3
        self.assertEqual(DigitString((1, 2)).value(tower), tower.ofFromInt(-2))

    def testParents(self):
        tower = makeTower(3)
        for vertex in enumerateBall(1, tower):
            for child in children(vertex, tower):
                self.assertEqual(parent(child), vertex)
                self.assertEqual(distanceFromBase(child), distanceFromBase(vertex) + 1)
        self.assertEqual(parent(ALPHA_VERTEX), BASE_VERTEX)
        self.assertIsNone(parent(BASE_VERTEX))

    def testPrecisionCap(self):
        tower = makeTower(3, 1, 1, 2)
        with self.assertRaises(PrecisionLossError):
            vertexMatrix(TreeVertex(0, 2, DigitString((0, 0))), tower)


class CartanTest(lsst.utils.tests.TestCase):
    """Reduction of group elements to a vertex times KZ."""

    def testIdentity(self):
        tower = makeTower(3)
        vertex, kz = cartanReduce(GMatrix.identity(tower))
        self.assertEqual(vertex, BASE_VERTEX)
        self.assertEqual(kz.central, 0)

    def testRoundTrip(self):
        rng = np.random.RandomState(6)
        for p, f, e in [(2, 1, 1), (3, 1, 1), (3, 2, 1), (3, 1, 2)]:
            tower = makeTower(p, f, e)
            for vertex in enumerateBall(2, tower):
                g = vertexMatrix(vertex, tower) @ GMatrix.fromKZ(randomKZ(tower, rng))
                self.assertEqual(cartanReduce(g)[0], vertex)

    def testCentral(self):
        tower = makeTower(3)
        vertex = TreeVertex(1, 1, DigitString((2,)))
        reduced, kz = cartanReduce(GMatrix.central(tower, 3) @ vertexMatrix(vertex, tower))
        self.assertEqual(reduced, vertex)
        self.assertEqual(kz.central, 3)

    def testBeta(self):
        tower = makeTower(3)
        self.assertEqual(cartanReduce(GMatrix.beta(tower))[0], ALPHA_VERTEX)
        for vertex in enumerateSphere(0, 2, tower):
            image = cartanReduce(GMatrix.beta(tower) @ vertexMatrix(vertex, tower))[0]
            self.assertEqual(image, TreeVertex(1, vertex.n, vertex.mu))

    def testInverse(self):
        tower = makeTower(3, 2)
        g = vertexMatrix(TreeVertex(0, 2, DigitString((4, 7))), tower)
        vertex, kz = cartanReduce(g @ g.inverse())
        self.assertEqual(vertex, BASE_VERTEX)
        self.assertEqual(kz.central, 0)


class TreeDotTest(lsst.utils.tests.TestCase):

    def testEdges(self):
        tower = makeTower(2)
        dot = makeTreeDot(tower, 1, highlight=[ALPHA_VERTEX])
        self.assertTrue(dot.startswith("graph tree {"))
        vertices = len(enumerateBall(1, tower))
        self.assertEqual(dot.count(" -- "), vertices - 1)
        self.assertEqual(dot.count("fillcolor"), 1)


class MemoryTester(lsst.utils.tests.MemoryTestCase):
    pass


def setup_module(module):
    lsst.utils.tests.init()


if __name__ == "__main__":
    lsst.utils.tests.init()
    unittest.main()
