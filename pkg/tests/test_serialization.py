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

import json
import unittest

import numpy as np

import lsst.utils.tests
from lsst.padic.hecke import (EMatrix, EScalar, LatticeBasis, ParseError, dumpJson, escalarFromJson,
                              escalarToJson, ematrixFromJson, ematrixToJson, inducedFunctionFromJson,
                              inducedFunctionToJson, latticeBasisFromJson, latticeBasisToJson, loadJson)

from utils import makeProfile, makeTower, randomFunction


class ScalarJsonTest(lsst.utils.tests.TestCase):

    def setUp(self):
        self.tower = makeTower(3, 1, 2)

    def testFormats(self):
        tower = self.tower
        self.assertEqual(escalarToJson(EScalar.zero(tower)), {"zero": True, "precision": None})
        self.assertEqual(escalarToJson(EScalar.zero(tower, 5)), {"zero": True, "precision": 5})
        data = escalarToJson(EScalar.pi(tower, -1))
        self.assertEqual(data["exponent"], -1)
        self.assertEqual(data["unit"], [[1], [0]])

    def testRoundTrip(self):
        tower = self.tower
        for scalar in (EScalar.fromInt(tower, 12), EScalar.pi(tower, -3), EScalar.zero(tower, 4),
                       EScalar(tower, tower.ofFromInt(5), 2, absprec=6)):
            decoded = escalarFromJson(tower, json.loads(json.dumps(escalarToJson(scalar))))
            self.assertEqual(decoded, scalar)
            self.assertEqual(decoded.absprec, scalar.absprec)

    def testMalformed(self):
        tower = self.tower
        for data in ({"exponent": 0}, {"exponent": 0, "unit": [[1]]}, "pi", None):
            with self.assertRaises(ParseError):
                escalarFromJson(tower, data)


class FunctionJsonTest(lsst.utils.tests.TestCase):

    def testRoundTrip(self):
        profile = makeProfile(3, 2, 1, (1, 2))
        f = randomFunction(profile, np.random.RandomState(16), depth=2, terms=5)
        decoded = inducedFunctionFromJson(profile, loadJson(dumpJson(inducedFunctionToJson(f))))
        self.assertEqual(decoded, f)
        self.assertEqual(inducedFunctionToJson(decoded), inducedFunctionToJson(f))

    def testRepeatedVerticesAccumulate(self):
        profile = makeProfile(3, 1, 1, (0,))
        term = {"side": 0, "n": 1, "digits": [2], "vector": [[[0], {"exponent": 0, "unit": [[1]],
                                                                     "precision": None}]]}
        f = inducedFunctionFromJson(profile, [term, term])
        self.assertEqual(len(f), 1)
        self.assertEqual(f.items()[0][1][(0,)], EScalar.fromInt(profile.tower, 2))

    def testMalformed(self):
        profile = makeProfile(3, 1, 1, (1,))
        good = {"exponent": 0, "unit": [[1]], "precision": None}
        bad = [
            [{"side": 0}],
            [{"side": 0, "n": 1, "digits": [3], "vector": []}],
            [{"side": 2, "n": 0, "digits": [], "vector": []}],
            [{"side": 0, "n": 2, "digits": [1], "vector": []}],
            [{"side": 0, "n": 0, "digits": [], "vector": [[[2], good]]}],
            [{"side": 0, "n": 0, "digits": [], "vector": [[[0, 0], good]]}],
            {"side": 0},
        ]
        for data in bad:
            with self.assertRaises(ParseError, msg=str(data)):
                inducedFunctionFromJson(profile, data)
        with self.assertRaises(ParseError):
            loadJson("[{")


class MatrixJsonTest(lsst.utils.tests.TestCase):

    def testMatrix(self):
        tower = makeTower(5)
        m = EMatrix.fromRows(tower, [[1, 5], [0, 25]])
        self.assertEqual(ematrixFromJson(tower, ematrixToJson(m)), m)
        data = ematrixToJson(m)
        data["rows"] = 3
        with self.assertRaises(ParseError):
            ematrixFromJson(tower, data)

    def testLattice(self):
        tower = makeTower(5)
        lattice = LatticeBasis.standard(tower, 2).scaled(-1)
        decoded = latticeBasisFromJson(tower, latticeBasisToJson(lattice))
        self.assertEqual(decoded.divisorExponents, [-1, -1])
        self.assertEqual(decoded.vectors, lattice.vectors)

    def testDeterministicText(self):
        text = dumpJson({"b": 1, "a": [1, 2]})
        self.assertTrue(text.endswith("\n"))
        self.assertLess(text.index('"a"'), text.index('"b"'))


class MemoryTester(lsst.utils.tests.MemoryTestCase):
    pass


def setup_module(module):
    lsst.utils.tests.init()


if __name__ == "__main__":
    lsst.utils.tests.init()
    unittest.main()
