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

"""The acceptance sweep over small fields and weight vectors."""

__all__ = ["SweepConfig", "SweepTask", "sweepRowSpecs", "evaluateSweepRow"]

import functools
import itertools
from concurrent.futures import ProcessPoolExecutor

import lsst.pex.config as pexConfig
import lsst.pipe.base as pipeBase
from lsst.utils.timer import timeMethod

from .counterexample import (buildCounterexample, checkCounterexample, counterexampleCase,
                             counterexampleDepth)
from .criterion import theoremConditions, vandermondeDetail
from .exceptions import SizeCapExceededError
from .induction import SatakeData
from .probes import ThetaKernelProbeTask
from .ringTower import RingTower
from .weights import WeightProfile


class SweepConfig(pexConfig.Config):
    primes = pexConfig.ListField(
        dtype=int,
        doc="Residue characteristics p to sweep",
        default=[2, 3, 5],
    )
    fMax = pexConfig.Field(
        dtype=int,
        doc="Largest residue degree f",
        default=2,
        check=lambda x: x >= 1,
    )
    eValues = pexConfig.ListField(
        dtype=int,
        doc="Ramification indices e; e > 1 is kept only when e divides q - 1",
        default=[1, 2],
    )
    dMax = pexConfig.Field(
        dtype=int,
        doc="Largest weight d_sigma per embedding",
        default=4,
        check=lambda x: x >= 0,
    )
    precision = pexConfig.Field(
        dtype=int,
        doc="Working precision M of every row",
        default=12,
        check=lambda x: x >= 2,
    )
    apExponent = pexConfig.Field(
        dtype=int,
        doc="a_p = pi**apExponent on every row",
        default=1,
        check=lambda x: x >= 1,
    )
    maxRows = pexConfig.Field(
        dtype=int,
        doc="Refuse sweeps with more rows than this",
        default=5000,
        check=lambda x: x >= 0,
    )
    maxVandermondeSize = pexConfig.Field(
        dtype=int,
        doc="Largest node count whose Vandermonde determinant is computed as a cross-check",
        default=32,
        check=lambda x: x >= 0,
    )
    doProbes = pexConfig.Field(
        dtype=bool,
        doc="Run the theta-kernel probe on passing rows and the counterexample check on failing rows",
        default=True,
    )
    maxProbeDimension = pexConfig.Field(
        dtype=int,
        doc="Only probe rows whose representation has at most this dimension",
        default=9,
        check=lambda x: x >= 1,
    )
    depth = pexConfig.Field(
        dtype=int,
        doc="Ball depth N for the probes",
        default=2,
        check=lambda x: x >= 0,
    )
    numProcesses = pexConfig.Field(
        dtype=int,
        doc="Worker processes; rows are evaluated serially when 1",
        default=1,
        check=lambda x: x >= 1,
    )


def sweepRowSpecs(config):
    """Plain-dict descriptions of every row, in (p, f, e, weights) order."""
    specs = []
    for p in sorted(config.primes):
        for f in range(1, config.fMax + 1):
            q = p**f
            for e in sorted(config.eValues):
                if e > 1 and (q - 1) % e:
                    continue
                for weights in itertools.product(range(config.dMax + 1), repeat=e*f):
                    specs.append({"p": p, "f": f, "e": e, "weights": list(weights),
                                  "precision": config.precision, "apExponent": config.apExponent,
                                  "doProbes": config.doProbes, "maxProbeDimension": config.maxProbeDimension,
                                  "depth": config.depth, "maxVandermondeSize": config.maxVandermondeSize})
    return specs


@functools.lru_cache(maxsize=None)
def _tower(p, f, e, precision):
    return RingTower.fromParameters(p, f, e, precision)


def evaluateSweepRow(spec):
    """Criterion, Vandermonde and probe verdicts for one row.

    Parameters
    ----------
    spec : `dict`
        One entry of `sweepRowSpecs`.

    Returns
    -------
    row : `dict`
    """
    tower = _tower(spec["p"], spec["f"], spec["e"], spec["precision"])
    profile = WeightProfile(tower, spec["weights"])
    conditions = theoremConditions(profile)
    vandermonde = vandermondeDetail(profile, maxSize=spec["maxVandermondeSize"])
    row = {"p": spec["p"], "f": spec["f"], "e": spec["e"], "weights": spec["weights"],
           "criterion": conditions.verdict, "witnessI": conditions.witnessI,
           "witnessII": conditions.witnessII, "vandermonde": vandermonde.unit,
           "vandermondeDet": None if vandermonde.detValuation is None else str(vandermonde.detValuation),
           "vandermondeNote": vandermonde.note,
           "agree": conditions.verdict == vandermonde.unit,
           "counterexampleCase": None, "counterexample": None, "containment": None}
    if not spec["doProbes"] or profile.dimension > spec["maxProbeDimension"]:
        return row
    satake = SatakeData.fromAp(tower, spec["apExponent"])
    if conditions.verdict:
        task = ThetaKernelProbeTask()
        task.config.depth = spec["depth"]
        row["containment"] = task.run(profile, satake).report.verdict
    else:
        case = counterexampleCase(profile).case
        row["counterexampleCase"] = case
        if counterexampleDepth(case) <= spec["depth"]:
            row["counterexample"] = checkCounterexample(buildCounterexample(profile, satake), satake).verdict
    return row


class SweepTask(pipeBase.Task):
    """Evaluate every row of the configured range and summarize the
    equivalences the sweep is meant to confirm.
    """
    ConfigClass = SweepConfig
    _DefaultName = "sweep"

    @timeMethod
    def run(self):
        """Run the sweep.

        Returns
        -------
        result : `lsst.pipe.base.Struct`
            ``rows`` (list of `dict`) and ``summary`` (`dict`) whose
            ``verdict`` is true when criterion and Vandermonde agree on every
            row and every probe run confirmed its expectation.

        Raises
        ------
        SizeCapExceededError
            Raised if the range has more than ``maxRows`` rows.
        """
        specs = sweepRowSpecs(self.config)
        if len(specs) > self.config.maxRows:
            raise SizeCapExceededError("Sweep has %d rows, more than maxRows=%d"
                                       % (len(specs), self.config.maxRows))
        self.log.info("Sweeping %d rows with %d process(es)", len(specs), self.config.numProcesses)
        if self.config.numProcesses > 1 and specs:
            with ProcessPoolExecutor(max_workers=self.config.numProcesses) as executor:
                rows = list(executor.map(evaluateSweepRow, specs))
        else:
            rows = [evaluateSweepRow(spec) for spec in specs]
        self.metadata["rows"] = len(rows)

        probed = [row for row in rows if row["containment"] is not None or row["counterexample"] is not None]
        summary = {
            "rows": len(rows),
            "criterionTrue": sum(row["criterion"] for row in rows),
            "allAgree": all(row["agree"] for row in rows),
            "probedRows": len(probed),
            "containmentCertified": all(row["containment"] for row in rows if row["containment"] is not None),
            "counterexamplesVerified": all(row["counterexample"] for row in rows
                                           if row["counterexample"] is not None),
        }
        summary["verdict"] = (summary["allAgree"] and summary["containmentCertified"]
                              and summary["counterexamplesVerified"])
        return pipeBase.Struct(rows=rows, summary=summary)
