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

"""Command-line front end.

Exit status is 0 when the report verdict is true, 1 when it is false and 2
on any error, in which case a one-line JSON object with the error class
and message is written to standard error.
"""

__all__ = ["main", "makeParser", "loadRunConfig"]

import argparse
import json
import logging
import sys
import time

import lsst.pex.config as pexConfig
from lsst.utils.logging import getLogger

from .criterion import bsGateDetail, isEasyCase, theoremConditions, vandermondeDetail
from .exceptions import (ComponentOutOfRangeError, ConfigInvalidError, NotApplicableError,
                         NotInjectiveError, NotInvertibleError, ParseError, PrecisionLossError,
                         SizeCapExceededError)
from .induction import heckeGeneric, heckeT
from .probes import (CounterexampleProbeTask, SeparationProbeTask, ThetaKernelProbeTask,
                     TInjectivityProbeTask, probeSummary)
from .runConfig import RunConfig
from .serialization import dumpJson, inducedFunctionFromJson, inducedFunctionToJson, loadJson
from .sweep import SweepTask
from .tree import makeTreeDot

_LOG = getLogger(__name__)
_PACKAGE_LOG = getLogger("lsst.padic.hecke")

PROBE_MODES = ("counterexample", "theta-kernel", "t-injectivity", "separation")

_HANDLED = (ComponentOutOfRangeError, ConfigInvalidError, NotApplicableError, NotInjectiveError,
            NotInvertibleError, ParseError, PrecisionLossError, SizeCapExceededError,
            pexConfig.FieldValidationError, OSError, ValueError, ArithmeticError, RuntimeError)


def _commonOptions():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="pex_config override file for RunConfig")
    common.add_argument("--depth", type=int, help="ball depth N for every probe")
    common.add_argument("--nmax", type=int, help="largest congruence exponent of the separation probe")
    common.add_argument("--precision", type=int, help="working precision M")
    common.add_argument("--seed", type=int, help="seed of the separation samples")
    common.add_argument("--out", help="output file; standard output if omitted")
    common.add_argument("--timing", action="store_true", default=None, help="add wall time to reports")
    common.add_argument("--log-level", dest="logLevel", default="WARNING",
                        choices=["DEBUG", "VERBOSE", "INFO", "WARNING", "ERROR"], help="logging threshold")
    return common


def makeParser():
    common = _commonOptions()
    parser = argparse.ArgumentParser(prog="padic-hecke", description=__doc__.splitlines()[0])
    subparsers = parser.add_subparsers(dest="command", required=True)

    subparsers.add_parser("check-criterion", parents=[common],
                          help="evaluate the weight conditions and the Vandermonde test")

    probe = subparsers.add_parser("probe", parents=[common], help="run one probe")
    probe.add_argument("mode", choices=PROBE_MODES)

    apply = subparsers.add_parser("hecke-apply", parents=[common], help="apply T to a function file")
    apply.add_argument("input", help="JSON function file")
    apply.add_argument("--oracle", action="store_true", help="also evaluate the convolution sum and compare")
    apply.add_argument("--with-ap", dest="withAp", action="store_true", help="apply T - a_p instead of T")

    sweep = subparsers.add_parser("sweep", parents=[common], help="run the acceptance sweep")
    sweep.add_argument("--primes", type=int, nargs="*")
    sweep.add_argument("--fmax", type=int)
    sweep.add_argument("--evalues", type=int, nargs="*")
    sweep.add_argument("--dmax", type=int)

    dot = subparsers.add_parser("export-tree-dot", parents=[common], help="write the ball B_N as DOT")
    dot.add_argument("--input", help="JSON function file whose support is highlighted")
    return parser


def loadRunConfig(args):
    """RunConfig from the optional override file plus command-line flags."""
    config = RunConfig()
    if args.config:
        config.load(args.config)
    if args.precision is not None:
        config.ring.precision = args.precision
    if args.depth is not None:
        config.setDepth(args.depth)
        config.sweep.depth = args.depth
    if args.nmax is not None:
        config.separation.nMax = args.nmax
    if args.seed is not None:
        config.separation.seed = args.seed
    if args.out is not None:
        config.outPath = args.out
    if args.timing:
        config.timing = True
    if args.command == "sweep":
        if args.primes is not None:
            config.sweep.primes = args.primes
        if args.fmax is not None:
            config.sweep.fMax = args.fmax
        if args.evalues is not None:
            config.sweep.eValues = args.evalues
        if args.dmax is not None:
            config.sweep.dMax = args.dmax
    config.validate()
    return config


def _readFunction(path, profile):
    with open(path) as stream:
        return inducedFunctionFromJson(profile, loadJson(stream.read()))


def _checkCriterion(config, args):
    tower = config.makeTower()
    profile = config.makeProfile(tower)
    report = theoremConditions(profile)
    vandermonde = vandermondeDetail(profile)
    result = {
        "config": probeSummary(profile),
        "criterion": report.toDict(),
        "vandermonde": {"unit": vandermonde.unit, "nodes": vandermonde.nodes,
                        "collision": None if vandermonde.collision is None else list(vandermonde.collision),
                        "detValuation": None if vandermonde.detValuation is None
                        else str(vandermonde.detValuation),
                        "note": vandermonde.note},
        "weightTable": profile.table(),
    }
    if config.satakeValAlpha is not None:
        gate = bsGateDetail(config.satakeValAlpha, config.satakeValBeta, profile)
        result["bsGate"] = {"balance": gate.balance, "equality": gate.equality,
                            "inequality": gate.inequality, "verdict": gate.verdict,
                            "easyCase": isEasyCase(config.satakeValAlpha, config.satakeValBeta)}
    return result, report.verdict


def _probe(config, args):
    tower = config.makeTower()
    profile = config.makeProfile(tower)
    if args.mode == "t-injectivity":
        report = TInjectivityProbeTask(config=config.tInjectivity).run(profile).report
    else:
        satake = config.makeSatake(tower)
        if args.mode == "counterexample":
            report = CounterexampleProbeTask(config=config.counterexample).run(profile, satake).report
        elif args.mode == "theta-kernel":
            report = ThetaKernelProbeTask(config=config.thetaKernel).run(profile, satake).report
        else:
            report = SeparationProbeTask(config=config.separation).run(profile, satake).report
    return report.toDict(), report.verdict


def _heckeApply(config, args):
    tower = config.makeTower()
    profile = config.makeProfile(tower)
    f = _readFunction(args.input, profile)
    satake = config.makeSatake(tower) if args.withAp else None
    image = heckeT(f, satake)
    verdict = True
    if args.oracle:
        oracle = heckeGeneric(f)
        if satake is not None:
            oracle = oracle - f.scaled(satake.ap)
        verdict = image == oracle
        if not verdict:
            _LOG.warning("Closed form and convolution sum disagree")
    return inducedFunctionToJson(image), verdict


def _sweep(config, args):
    result = SweepTask(config=config.sweep).run()
    return {"rows": result.rows, "summary": result.summary}, result.summary["verdict"]


def _exportTreeDot(config, args):
    tower = config.makeTower()
    highlight = ()
    if args.input:
        highlight = _readFunction(args.input, config.makeProfile(tower)).support()
    return makeTreeDot(tower, config.thetaKernel.depth, highlight), True


_COMMANDS = {
    "check-criterion": _checkCriterion,
    "probe": _probe,
    "hecke-apply": _heckeApply,
    "sweep": _sweep,
    "export-tree-dot": _exportTreeDot,
}


def _write(text, path):
    if path:
        with open(path, "w") as stream:
            stream.write(text)
    else:
        sys.stdout.write(text)


def _attachStderrHandler(levelName):
    """Send package log records at ``levelName`` and above to the current
    standard error.
    """
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    _PACKAGE_LOG.setLevel(levelName)
    _PACKAGE_LOG.addHandler(handler)
    return handler


def main(argv=None):
    """Run one subcommand; returns the exit status."""
    parser = makeParser()
    args = parser.parse_args(argv)
    handler = _attachStderrHandler(args.logLevel)
    try:
        return _run(args)
    finally:
        _PACKAGE_LOG.removeHandler(handler)


def _run(args):
    start = time.perf_counter()
    try:
        config = loadRunConfig(args)
        result, verdict = _COMMANDS[args.command](config, args)
    except _HANDLED as e:
        name = type(e).__name__
        if isinstance(e, pexConfig.FieldValidationError):
            name = ConfigInvalidError.__name__
        sys.stderr.write(json.dumps({"error": name, "message": str(e).strip().splitlines()[0]
                                     if str(e).strip() else name}, sort_keys=True) + "\n")
        return 2
    if isinstance(result, str):
        text = result
    else:
        if config.timing and isinstance(result, dict):
            result["wallTime"] = round(time.perf_counter() - start, 3)
        text = dumpJson(result)
    _write(text, config.outPath)
    return 0 if verdict else 1


if __name__ == "__main__":
    sys.exit(main())
