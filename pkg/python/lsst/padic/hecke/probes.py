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

"""Finite-depth probes of the lattice (T - a_p)(ind) meets ind^0.

All probes rest on the outward leading term: the level-(N + 1) part of
T(h) is T+ of the level-N part of h, and the q children of distinct
vertices are disjoint. On one vertex of side ``s``, T+ is the stacked map
``LEADING_BLOCK[s]`` from V to V**q, so per-side Smith forms of these two
blocks decide integrality, injectivity and congruence solving level by
level. Dense matrices of (T - a_p) on a ball are assembled only when small
enough and serve as a cross-check.
"""

__all__ = ["ThetaKernelProbeConfig", "ThetaKernelProbeTask", "TInjectivityProbeConfig",
           "TInjectivityProbeTask", "SeparationProbeConfig", "SeparationProbeTask",
           "CounterexampleProbeConfig", "CounterexampleProbeTask", "leadingBlock",
           "assembleHeckeMatrix", "probeSummary"]

import numpy as np

import lsst.pex.config as pexConfig
import lsst.pipe.base as pipeBase
from lsst.utils.timer import timeMethod

from .counterexample import (buildCounterexample, checkCounterexample, counterexampleCase,
                             counterexampleDepth)
from .criterion import theoremConditions
from .dvrLinalg import EMatrix, preimageLattice, smithForm
from .exceptions import NotApplicableError, PrecisionLossError, SizeCapExceededError
from .induction import InducedFunction, heckeT
from .latticeVector import KZElement, LatticeVector, actKZ, conjugatedStep, psiAlphaInv
from .probeReport import ProbeReport
from .ringTower import EScalar
from .serialization import inducedFunctionToJson
from .tree import children, enumerateBall, enumerateSphere


def probeSummary(profile, satake=None):
    """Configuration block copied into every report."""
    summary = dict(profile.tower.summary())
    summary["weights"] = list(profile.d)
    if satake is not None:
        summary.update(satake.toDict())
    return summary


def _stepOperator(profile, side, code):
    tower = profile.tower
    lam = tower.ofTeichmuller(tower.fqDecode(code))
    if side == 0:
        return lambda v: conjugatedStep(v, lam)
    lower = KZElement.lowerUnipotent(tower, tower.ofNeg(lam))
    return lambda v: psiAlphaInv(actKZ(lower, v))


def leadingBlock(profile, side):
    """T+ on one vertex of the given side as a ``(q D) x D`` matrix with its
    Smith form; cached on the profile.

    Returns
    -------
    result : `lsst.pipe.base.Struct`
        ``matrix``, ``smith`` (see `lsst.padic.hecke.smithForm`) and
        ``divisorValuations`` (val_F units).
    """
    key = "leadingBlock%d" % side
    cached = profile.cache.get(key)
    if cached is not None:
        return cached
    tower = profile.tower
    size = profile.dimension
    matrix = EMatrix.zeros(tower, tower.q*size, size)
    basis = profile.multiIndices()
    for code in range(tower.q):
        step = _stepOperator(profile, side, code)
        for column, index in enumerate(basis):
            image = step(LatticeVector.basis(profile, index)).coeffs.ravel()
            matrix.entries[code*size:(code + 1)*size, column] = image
    smith = smithForm(matrix)
    result = pipeBase.Struct(matrix=matrix, smith=smith,
                             divisorValuations=[d.valuation() for d in smith.divisors])
    profile.cache[key] = result
    return result


def _blockCertified(block, dimension):
    """True if the block has full rank and unit elementary divisors."""
    return block.smith.rank == dimension and all(v.isFinite() and v.value == 0
                                                  for v in block.divisorValuations)


def _blockCertificate(blocks):
    return {"side%d" % side: {"rank": block.smith.rank,
                              "divisorValuations": [str(v) for v in block.divisorValuations]}
            for side, block in enumerate(blocks)}


def assembleHeckeMatrix(profile, depth, satake=None):
    """Matrix of T (or T - a_p) from the ball of the given depth to the
    ball one level larger.

    Columns and rows are ordered by vertex (level, side, digits), then
    multi-index.

    Returns
    -------
    result : `lsst.pipe.base.Struct`
        ``matrix``, ``columns`` and ``rows`` (lists of
        ``(vertex, multiIndex)`` pairs).
    """
    tower = profile.tower
    basis = profile.multiIndices()
    columns = [(vertex, index) for vertex in enumerateBall(depth, tower) for index in basis]
    rows = [(vertex, index) for vertex in enumerateBall(depth + 1, tower) for index in basis]
    rowIndex = {vertex: i*len(basis) for i, vertex in enumerate(enumerateBall(depth + 1, tower))}
    matrix = EMatrix.zeros(tower, len(rows), len(columns))
    for column, (vertex, index) in enumerate(columns):
        source = InducedFunction.single(profile, vertex, LatticeVector.basis(profile, index))
        for target, vector in heckeT(source, satake).terms.items():
            start = rowIndex[target]
            matrix.entries[start:start + len(basis), column] = vector.coeffs.ravel()
    return pipeBase.Struct(matrix=matrix, columns=columns, rows=rows)


def _functionFromCoordinates(profile, columns, values):
    f = InducedFunction(profile)
    basis = profile.multiIndices()
    for start in range(0, len(columns), len(basis)):
        vertex = columns[start][0]
        coeffs = np.empty(profile.shape, dtype=object)
        coeffs.ravel()[:] = values[start:start + len(basis)]
        f.addTerm(vertex, LatticeVector(profile, coeffs))
    return f


class ThetaKernelProbeConfig(pexConfig.Config):
    depth = pexConfig.Field(
        dtype=int,
        doc="Largest level N of the ball B_N on which (T - a_p) is probed",
        default=2,
        check=lambda x: x >= 0,
    )
    maxDenseColumns = pexConfig.Field(
        dtype=int,
        doc="Assemble the dense map B_N -> B_(N+1) as a cross-check when it has at most this many columns",
        default=48,
        check=lambda x: x >= 0,
    )


class ThetaKernelProbeTask(pipeBase.Task):
    """Decide whether every h in B_N(E) with (T - a_p)(h) integral is itself
    integral.

    Notes
    -----
    Containment is certified by the leading blocks having unit elementary
    divisors, which propagates integrality from the top level down. When
    it fails, the violating vector comes from the dense preimage lattice if
    the dense map is small enough, otherwise from the explicit
    counterexample construction.
    """
    ConfigClass = ThetaKernelProbeConfig
    _DefaultName = "thetaKernelProbe"

    @timeMethod
    def run(self, profile, satake):
        """Probe one weight profile.

        Parameters
        ----------
        profile : `lsst.padic.hecke.WeightProfile`
        satake : `lsst.padic.hecke.SatakeData`

        Returns
        -------
        result : `lsst.pipe.base.Struct`
            ``report`` (`lsst.padic.hecke.ProbeReport`) and ``lattice``
            (the dense preimage lattice, or None when not assembled).

        Raises
        ------
        SizeCapExceededError
            Raised if containment fails and neither the dense map nor the
            counterexample construction fits the requested depth.
        """
        depth = self.config.depth
        conditions = theoremConditions(profile)
        blocks = [leadingBlock(profile, side) for side in (0, 1)]
        blockOk = all(_blockCertified(block, profile.dimension) for block in blocks)
        certificate = {"leadingBlocks": _blockCertificate(blocks), "conditions": conditions.toDict()}
        notes = []
        self.log.info("Leading blocks for %r are %s", profile, "unimodular" if blockOk else "not unimodular")
        if blockOk != conditions.verdict:
            raise RuntimeError("Leading-block certificate (%s) contradicts the weight conditions (%s) for %r"
                               % (blockOk, conditions.verdict, profile))

        lattice = None
        verdict = blockOk
        columns = len(enumerateBall(depth, profile.tower))*profile.dimension
        self.metadata["denseColumns"] = columns
        construction = None
        if not blockOk:
            case = counterexampleCase(profile).case
            if counterexampleDepth(case) <= depth:
                h = buildCounterexample(profile, satake)
                if not checkCounterexample(h, satake).verdict:
                    raise RuntimeError("The %s counterexample failed its check" % case)
                construction = case
                certificate["violating"] = inducedFunctionToJson(h)
                notes.append("violating function from the %s construction" % case)

        if columns <= self.config.maxDenseColumns:
            dense = assembleHeckeMatrix(profile, depth, satake)
            lattice = preimageLattice(dense.matrix)
            violating = [vector for vector in lattice.vectors if not all(x.isIntegral() for x in vector)]
            verdict = not violating
            certificate["denseDivisorExponents"] = lattice.divisorExponents
            if violating:
                h = _functionFromCoordinates(profile, dense.columns, violating[0])
                if not checkCounterexample(h, satake).verdict:
                    raise RuntimeError("Dense preimage generator failed the counterexample check")
                certificate["denseViolating"] = inducedFunctionToJson(h)
            if verdict and construction is not None:
                raise RuntimeError("Dense preimage is integral although the %s construction violates it"
                                   % construction)
            if not verdict and blockOk:
                raise RuntimeError("Dense preimage is not integral although the leading blocks "
                                   "are unimodular")
            if verdict and not blockOk:
                notes.append("containment holds on this ball; a violation needs a larger depth")
        elif not blockOk and construction is None:
            case = counterexampleCase(profile).case
            raise SizeCapExceededError("The %s counterexample needs depth %d > %d and the dense map has "
                                       "%d > %d columns" % (case, counterexampleDepth(case), depth,
                                                            columns, self.config.maxDenseColumns))
        else:
            self.log.debug("Dense map has %d columns; relying on the leading blocks", columns)

        report = ProbeReport(probeSummary(profile, satake), "thetaKernel", depth, verdict, certificate,
                             notes=notes)
        return pipeBase.Struct(report=report, lattice=lattice)


class TInjectivityProbeConfig(pexConfig.Config):
    depth = pexConfig.Field(
        dtype=int,
        doc="Largest level N of the ball on which injectivity of T is probed",
        default=2,
        check=lambda x: x >= 0,
    )
    maxDenseColumns = pexConfig.Field(
        dtype=int,
        doc="Also compute the rank of the dense map when it has at most this many columns",
        default=48,
        check=lambda x: x >= 0,
    )


class TInjectivityProbeTask(pipeBase.Task):
    """Check that T has trivial kernel on B_N(E)."""
    ConfigClass = TInjectivityProbeConfig
    _DefaultName = "tInjectivityProbe"

    @timeMethod
    def run(self, profile):
        """Rank profile of T on the ball of the configured depth.

        Returns
        -------
        result : `lsst.pipe.base.Struct`
            ``report`` (`lsst.padic.hecke.ProbeReport`).
        """
        depth = self.config.depth
        tower = profile.tower
        blocks = [leadingBlock(profile, side) for side in (0, 1)]
        ranks = [block.smith.rank for block in blocks]
        verdict = all(rank == profile.dimension for rank in ranks)
        levelRanks = [tower.q**m*sum(ranks) for m in range(depth + 1)]
        certificate = {"leadingBlocks": _blockCertificate(blocks), "levelRanks": levelRanks,
                       "dimension": len(enumerateBall(depth, tower))*profile.dimension}
        columns = certificate["dimension"]
        if columns <= self.config.maxDenseColumns:
            denseRank = smithForm(assembleHeckeMatrix(profile, depth).matrix).rank
            certificate["denseRank"] = denseRank
            if (denseRank == columns) != verdict:
                raise RuntimeError("Dense rank %d of %d columns disagrees with the leading blocks"
                                   % (denseRank, columns))
        self.metadata["dimension"] = columns
        self.log.info("T on B_%d has block ranks %s of %d", depth, ranks, profile.dimension)
        report = ProbeReport(probeSummary(profile), "tInjectivity", depth, verdict, certificate)
        return pipeBase.Struct(report=report)


class SeparationProbeConfig(pexConfig.Config):
    depth = pexConfig.Field(
        dtype=int,
        doc="Support level N of the sampled integral functions",
        default=2,
        check=lambda x: x >= 1,
    )
    nMax = pexConfig.Field(
        dtype=int,
        doc="Largest exponent n of the congruences modulo p**n",
        default=3,
        check=lambda x: x >= 1,
    )
    seed = pexConfig.Field(
        dtype=int,
        doc="Seed of the random sample functions",
        default=1,
    )
    numRandom = pexConfig.Field(
        dtype=int,
        doc="Number of random samples of each kind",
        default=1,
        check=lambda x: x >= 0,
    )


class SeparationProbeTask(pipeBase.Task):
    """Solve h = (T - a_p)(x) modulo p**n for sampled integral h on B_N and
    check that every solution descends: its level-N part vanishes modulo
    p**n and the rest is integral modulo p**n.

    Notes
    -----
    This is a finite-depth surrogate: solutions are sought on B_N and
    congruences are certified up to the precision of the ring.
    """
    ConfigClass = SeparationProbeConfig
    _DefaultName = "separationProbe"

    @timeMethod
    def run(self, profile, satake):
        """Run the congruence descent for every sample and every n.

        Returns
        -------
        result : `lsst.pipe.base.Struct`
            ``report`` (`lsst.padic.hecke.ProbeReport`).

        Raises
        ------
        NotApplicableError
            Raised if the weight conditions fail.
        PrecisionLossError
            Raised if p**nMax is not below the precision of the ring.
        """
        tower = profile.tower
        depth, nMax = self.config.depth, self.config.nMax
        if not theoremConditions(profile).verdict:
            raise NotApplicableError("Separation needs the weight conditions, which fail for %r" % (profile,))
        if nMax >= tower.precision:
            raise PrecisionLossError("Congruences modulo p^%d need precision above %d; raise the precision"
                                     % (nMax, tower.precision))
        blocks = [leadingBlock(profile, side) for side in (0, 1)]
        blockOk = all(_blockCertified(block, profile.dimension) for block in blocks)

        samples = self._makeSamples(profile, satake)
        margin = 0
        results = []
        consistent = True
        for n in range(1, nMax + 1):
            try:
                rows = [self._checkSample(profile, satake, name, h, g, n, blocks) for name, h, g in samples]
            except PrecisionLossError as e:
                self.log.warning("Congruences modulo p^%d are not certified: %s", n, e)
                break
            margin = n
            results.extend(rows)
            consistent = consistent and all(row["consistent"] for row in rows)
        self.metadata["precisionMargin"] = margin
        verdict = blockOk and consistent and margin == nMax
        certificate = {"leadingBlocks": _blockCertificate(blocks), "samples": results,
                       "seed": self.config.seed}
        notes = ["the level-N part of a solution is bounded through the leading-block divisors"]
        report = ProbeReport(probeSummary(profile, satake), "separation", depth, verdict, certificate,
                             precisionMargin=margin, notes=notes)
        return pipeBase.Struct(report=report)

    def _randomIntegral(self, profile, vertices, rng):
        tower = profile.tower
        f = InducedFunction(profile)
        for vertex in vertices:
            coeffs = np.empty(profile.shape, dtype=object)
            for index in np.ndindex(*profile.shape):
                coeffs[index] = EScalar.fromInt(tower, int(rng.randint(0, tower.p)))
            f.addTerm(vertex, LatticeVector(profile, coeffs))
        return f

    def _makeSamples(self, profile, satake):
        """(name, h, g) triples; g is a known preimage or None.

        The ``lifted`` samples have a preimage with a nonzero level-N part,
        divisible by p**nMax, so that h stays on B_N modulo p**nMax.
        """
        tower = profile.tower
        rng = np.random.RandomState(self.config.seed)
        depth = self.config.depth
        inner = enumerateBall(depth - 1, tower)
        top = [vertex for side in (0, 1) for vertex in enumerateSphere(side, depth, tower)]
        origin = [0]*len(profile.d)
        lift = EScalar.fromInt(tower, tower.p**self.config.nMax)
        samples = [("base", InducedFunction.single(profile, enumerateSphere(0, 0, tower)[0],
                                                   LatticeVector.basis(profile, origin)), None)]
        for i in range(self.config.numRandom):
            g = self._randomIntegral(profile, inner, rng)
            samples.append(("image%d" % i, heckeT(g, satake), g))
        for i in range(self.config.numRandom):
            g = self._randomIntegral(profile, inner, rng)
            g = g + self._randomIntegral(profile, top, rng).scaled(lift)
            h = heckeT(g, satake).restrictedTo(enumerateBall(depth, tower))
            samples.append(("lifted%d" % i, h, g))
        for i in range(self.config.numRandom):
            h = self._randomIntegral(profile, enumerateBall(depth, tower), rng)
            samples.append(("random%d" % i, h, None))
        return samples

    @staticmethod
    def _forcedExponent(blocks, size, bound):
        """Largest k such that every level-N part x_N with T+(x_N) = 0
        modulo pi**bound is divisible by pi**k, capped at ``bound``.
        """
        forced = bound
        for block in blocks:
            smith = block.smith
            if smith.rank < size:
                return 0
            for divisor in smith.divisors:
                forced = min(forced, max(0, bound - divisor.ordPi().value))
        return forced

    def _solve(self, profile, satake, h, n, blocks):
        """Top-down solution x on B_N of (T - a_p)(x) = h mod p**n, or None
        if there is none.

        The level-N layer only has to kill the part of h above level N, so
        its particular solution is zero; the homogeneous freedom is bounded
        separately by `_forcedExponent`.
        """
        tower = profile.tower
        bound = tower.e*n
        size = profile.dimension
        residual = h.copy()
        x = InducedFunction(profile)
        for level in range(self.config.depth, -1, -1):
            layer = InducedFunction(profile)
            for side in (0, 1):
                smith = blocks[side].smith
                for vertex in enumerateSphere(side, level, tower):
                    target = [c for child in children(vertex, tower)
                              for c in residual.vector(child).coeffs.ravel()]
                    transformed = smith.left.apply(target)
                    if not all(value.isDivisibleByPi(bound) for value in transformed[smith.rank:]):
                        return None
                    y = [transformed[i]*d.inverse() for i, d in enumerate(smith.divisors)]
                    y += [EScalar.zero(tower)]*(size - len(y))
                    coeffs = np.empty(profile.shape, dtype=object)
                    coeffs.ravel()[:] = smith.right.apply(y)
                    layer.addTerm(vertex, LatticeVector(profile, coeffs))
            residual = residual - heckeT(layer, satake)
            x = x + layer
        if not all(vector.isDivisibleByPi(bound) for _, vector in residual.items()):
            return None
        return x

    def _checkSample(self, profile, satake, name, h, g, n, blocks):
        tower = profile.tower
        bound = tower.e*n
        forced = self._forcedExponent(blocks, profile.dimension, bound)
        x = self._solve(profile, satake, h, n, blocks)
        row = {"sample": name, "n": n, "solvable": x is not None, "consistent": True,
               "levelNDivisibility": forced, "descended": forced >= bound}
        if x is None:
            row["consistent"] = g is None
            return row
        difference = heckeT(x, satake) - h
        verified = all(vector.isDivisibleByPi(bound) for _, vector in difference.items())
        integral = x.isIntegral()
        row.update(verified=verified, integral=integral)
        row["consistent"] = verified and integral and row["descended"]
        if g is not None:
            top = [vertex for side in (0, 1) for vertex in enumerateSphere(side, self.config.depth, tower)]
            matches = all(vector.isDivisibleByPi(bound) for _, vector in (x - g).items())
            row["matchesPreimage"] = matches
            row["preimageTopVanishes"] = all(g.vector(vertex).isDivisibleByPi(bound) for vertex in top)
            row["consistent"] = row["consistent"] and matches and row["preimageTopVanishes"]
        return row


class CounterexampleProbeConfig(pexConfig.Config):
    depth = pexConfig.Field(
        dtype=int,
        doc="Largest support level allowed for the constructed function",
        default=2,
        check=lambda x: x >= 0,
    )


class CounterexampleProbeTask(pipeBase.Task):
    """Build the explicit counterexample for a failing profile and check it."""
    ConfigClass = CounterexampleProbeConfig
    _DefaultName = "counterexampleProbe"

    @timeMethod
    def run(self, profile, satake):
        """Returns
        -------
        result : `lsst.pipe.base.Struct`
            ``report`` (`lsst.padic.hecke.ProbeReport`) and ``h``.

        Raises
        ------
        NotApplicableError
            Raised if the weight conditions hold.
        SizeCapExceededError
            Raised if the construction needs more than the configured depth.
        """
        case = counterexampleCase(profile).case
        if counterexampleDepth(case) > self.config.depth:
            raise SizeCapExceededError("The %s construction needs depth %d > %d"
                                       % (case, counterexampleDepth(case), self.config.depth))
        h = buildCounterexample(profile, satake)
        report = checkCounterexample(h, satake, probeSummary(profile, satake))
        report.notes.append("construction: %s" % case)
        report.certificate["case"] = case
        self.log.info("Counterexample %s for %r: verdict %s", case, profile, report.verdict)
        return pipeBase.Struct(report=report, h=h)
