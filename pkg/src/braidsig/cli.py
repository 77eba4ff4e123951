"""``braidsig`` command line.

Exit status: 0 on success, 1 for bad input (flags, braid text, angles), 2 when
a computed result fails its own validation.  Every subcommand takes ``--json``
and most take ``--output``; files are written to a temporary sibling and then
renamed into place.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import __version__
from ._accel import backend_name
from .braid import BraidWord, betti_number, format_braid, parse_braid

EXIT_OK, EXIT_INPUT, EXIT_INVALID = 0, 1, 2


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise InputError(message)


def _umask() -> int:
    mask = os.umask(0)
    os.umask(mask)
    return mask


def atomic_write(path: str | Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.chmod(tmp, 0o666 & ~_umask())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(args, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if getattr(args, "output", None):
        atomic_write(args.output, text)
    else:
        sys.stdout.write(text)


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def _theta(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"theta must be a decimal number, got {text!r}") from None
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"theta must lie strictly between 0 and 1, got {text}")
    return value


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _braid(args, three: bool = False) -> BraidWord:
    strands = 3 if three and args.strands is None else args.strands
    w = parse_braid(args.braid, strands)
    if three and w.strands != 3:
        raise InputError(f"this subcommand needs a 3-strand braid, got {w.strands} strands")
    return w


# -- subcommands -------------------------------------------------------------


def cmd_sig(args) -> int:
    from .signature import IllConditioned, levine_tristram

    w = _braid(args)
    ill = False
    try:
        res = levine_tristram(w, args.theta, args.rel_tol)
    except IllConditioned as exc:
        res, ill = exc.result, True
        print(f"warning: {exc}", file=sys.stderr)
    if args.json:
        _emit(args, _dumps({
            "braid": format_braid(w), "strands": w.strands, "theta": args.theta, "b1": betti_number(w),
            "signature": res.signature, "nullity": res.nullity, "margin": res.margin, "ill_conditioned": ill,
        }))
    else:
        _emit(args, f"signature={res.signature} nullity={res.nullity}")
    return EXIT_OK


def cmd_profile(args) -> int:
    from .signature import profile_csv, signature_profile

    samples = signature_profile(_braid(args), args.grid, args.rel_tol)
    if args.json:
        _emit(args, _dumps([
            {"theta": s.theta, "signature": s.signature, "nullity": s.nullity,
             "margin": s.margin, "ill_conditioned": s.ill_conditioned}
            for s in samples
        ]))
    else:
        _emit(args, profile_csv(samples))
    return EXIT_OK


def cmd_seifert(args) -> int:
    from .seifert import seifert_matrix

    v = seifert_matrix(_braid(args))
    _emit(args, v.to_json() if args.json else v.grid())
    return EXIT_OK


def cmd_alexander(args) -> int:
    from .burau import alexander_from_burau, alexander_from_seifert
    from .seifert import seifert_matrix

    w = _braid(args)
    polys = {}
    if args.method in ("seifert", "both"):
        polys["seifert"] = alexander_from_seifert(seifert_matrix(w)).normalized()
    if args.method in ("burau", "both"):
        polys["burau"] = alexander_from_burau(w).normalized()
    agree = len(polys) < 2 or polys["seifert"].equivalent(polys["burau"])
    if args.json:
        payload = {k: str(v) for k, v in polys.items()}
        payload["agree"] = agree
        _emit(args, _dumps(payload))
    else:
        _emit(args, "\n".join(f"{k}: {v}" for k, v in polys.items()))
    if not agree:
        print("error: Seifert and Burau Alexander polynomials differ", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


def cmd_nf3(args) -> int:
    from .garside3 import normal_form_3_with_conjugator

    nf, conj = normal_form_3_with_conjugator(_braid(args, three=True))
    if args.json:
        payload = json.loads(nf.to_json())
        payload["conjugator"] = format_braid(conj)
        _emit(args, _dumps(payload))
    else:
        _emit(args, nf.to_text())
    return EXIT_OK


def cmd_decompose(args) -> int:
    from .plumbing import check_certificate, pentafoil_decompose

    w = _braid(args, three=True)
    d = pentafoil_decompose(w)
    verdict = check_certificate(w, d)
    if args.certificate:
        atomic_write(args.certificate, d.to_json() + "\n")
    ins = d.insertions
    if args.json:
        _emit(args, _dumps({
            "base": format_braid(d.base), "removals": len(ins),
            "insertions": [[x.position, x.generator, x.power] for x in ins],
            "tags": [t.value for t in d.tags], "valid": bool(verdict),
        }))
    else:
        lines = [f"base={format_braid(d.base) or '(empty)'}", f"removals={len(ins)}",
                 "insertions=" + " ".join(f"{x.generator}^{x.power}@{x.position}" for x in ins),
                 "tags=" + ",".join(t.value for t in d.tags)]
        _emit(args, "\n".join(lines))
    if not verdict:
        print(f"error: certificate failed validation: {verdict.reason}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


def cmd_check(args) -> int:
    from .plumbing import Decomposition, check_certificate

    w = _braid(args, three=True)
    try:
        d = Decomposition.from_json(Path(args.certificate).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"cannot read certificate: {exc}") from None
    except (ValueError, KeyError, TypeError, AttributeError) as exc:
        raise InputError(f"malformed certificate: {exc}") from None
    verdict = check_certificate(w, d)
    if args.json:
        _emit(args, _dumps({"valid": verdict.ok, "failed_step": verdict.failed_step, "reason": verdict.reason}))
    else:
        _emit(args, "valid" if verdict else f"invalid: {verdict.reason}")
    return EXIT_OK if verdict else EXIT_INVALID


def _thetas(args) -> np.ndarray:
    if args.theta:
        return np.asarray(args.theta, dtype=np.float64)
    return np.arange(1, args.grid + 1) / (args.grid + 1)


def cmd_sweep(args) -> int:
    from . import experiments as ex

    if args.pipeline:
        if args.seed is None:
            raise InputError("--pipeline runs randomized experiments and needs --seed")
        cfg = ex.PipelineConfig(seed=args.seed, workers=args.workers)
        files = ex.run_pipeline(cfg)
        for name, text in files.items():
            atomic_write(Path(args.pipeline) / name, text)
        _emit(args, _dumps(sorted(files)) if args.json else "\n".join(sorted(files)))
        return EXIT_OK
    if args.strands < 2:
        raise InputError("--strands must be at least 2")
    if args.summary:
        reports = [ex.ratio_scan(args.strands, args.length, float(t), max(args.b1_min, 1), workers=args.workers)
                   for t in _thetas(args)]
        if args.json:
            _emit(args, _dumps([r.to_dict() for r in reports]))
        else:
            _emit(args, "\n".join(
                f"theta={r.theta!r} min={r.minimum!r} argmin={r.argmin} liminf={r.liminf_estimate!r} "
                f"band={r.liminf_band} used={r.words_used} degenerate={r.degenerate}"
                for r in reports))
        return EXIT_OK
    rows = ex.sweep_rows(args.strands, args.length, _thetas(args), args.b1_min)
    _emit(args, _dumps([r.__dict__ for r in rows]) if args.json else ex.sweep_csv(rows))
    return EXIT_OK


def cmd_family(args) -> int:
    from . import experiments as ex

    rows = ex.family_scan(args.family, args.n_max, thetas=_thetas(args), n_min=args.n_min)
    _emit(args, _dumps([r.__dict__ for r in rows]) if args.json else ex.sweep_csv(rows))
    return EXIT_OK


def cmd_gg(args) -> int:
    from .experiments import gg_check

    rep = gg_check(args.k, tuple(args.lengths), args.samples, args.grid, args.seed)
    if args.json:
        _emit(args, rep.to_json())
    else:
        lines = [f"k={rep.k} grid={rep.grid} seed={rep.seed} verdict={'pass' if rep.verdict else 'fail'}"]
        for n in rep.lengths:
            lines.append(f"length={n} max_dev={rep.max_deviation[n]!r} mean_dev={rep.mean_deviation[n]!r} "
                         f"within_k-1={rep.within_literal[n]!r}")
        _emit(args, "\n".join(lines))
    return EXIT_OK if rep.verdict else EXIT_INVALID


def cmd_verify(args) -> int:
    from .verify import run_checks

    results = run_checks(args.seed, quick=not args.full)
    if args.json:
        _emit(args, _dumps({"version": __version__, "backend": backend_name(), "seed": args.seed,
                            "checks": [r.__dict__ for r in results]}))
    else:
        _emit(args, "\n".join(f"{'PASS' if r.ok else 'FAIL'} {r.name}: {r.detail}" for r in results))
    return EXIT_OK if all(r.ok for r in results) else EXIT_INVALID


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="braidsig", description="Signatures and decompositions of positive braids.")
    p.add_argument("--version", action="version", version=f"braidsig {__version__} ({backend_name()})")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text, braid=False, theta=False, output=True):
        sp = sub.add_parser(name, help=help_text)
        sp.set_defaults(func=func)
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        if output:
            sp.add_argument("--output", "-o", help="write the result to this file instead of stdout")
        if braid:
            sp.add_argument("--braid", "-b", required=True, help='braid word such as "1^2 2 1^3"')
            sp.add_argument("--strands", "-n", type=int, help="strand count (default: largest generator + 1)")
        if theta:
            sp.add_argument("--rel-tol", type=float, default=1e-9, help="relative null threshold for eigenvalues")
        return sp

    sp = add("sig", cmd_sig, "Levine-Tristram signature at one angle", braid=True, theta=True)
    sp.add_argument("--theta", type=_theta, default=0.5, help="omega = exp(2 pi i theta), 0 < theta < 1")

    sp = add("profile", cmd_profile, "signature at theta = j/(grid+1)", braid=True, theta=True)
    sp.add_argument("--grid", type=_positive, default=99)

    add("seifert", cmd_seifert, "Seifert matrix of the canonical surface", braid=True)

    sp = add("alexander", cmd_alexander, "Alexander polynomial", braid=True)
    sp.add_argument("--method", choices=("seifert", "burau", "both"), default="both")

    add("nf3", cmd_nf3, "conjugacy normal form of a 3-braid", braid=True)

    sp = add("decompose", cmd_decompose, "pentafoil decomposition of a 3-braid", braid=True)
    sp.add_argument("--certificate", "-c", help="write the certificate JSON here")

    sp = add("check", cmd_check, "validate a decomposition certificate", braid=True)
    sp.add_argument("--certificate", "-c", required=True)

    def angles(sp, grid):
        sp.add_argument("--theta", type=_theta, action="append", help="sample angle (repeatable)")
        sp.add_argument("--grid", type=_positive, default=grid, help="theta = j/(grid+1) when no --theta")

    sp = add("sweep", cmd_sweep, "enumerate positive words and tabulate signatures")
    sp.add_argument("--strands", "-n", type=int, default=3)
    sp.add_argument("--length", "-L", type=_positive, default=8)
    sp.add_argument("--b1-min", type=int, default=0)
    angles(sp, 9)
    sp.add_argument("--summary", action="store_true", help="report ratio minima instead of rows")
    sp.add_argument("--workers", type=_positive, default=1)
    sp.add_argument("--pipeline", metavar="DIR", help="run the default experiment pipeline into DIR")
    sp.add_argument("--seed", type=int)

    sp = add("family", cmd_family, "signatures along a braid family")
    sp.add_argument("--family", required=True, choices=("s1s1s2s2", "twist", "torus2"))
    sp.add_argument("--n-max", type=_positive, required=True)
    sp.add_argument("--n-min", type=_positive, default=1)
    angles(sp, 99)

    sp = add("gg", cmd_gg, "quasi-linearity deviations on random 3-braids")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--k", type=int, default=3, choices=(3,))
    sp.add_argument("--lengths", type=_positive, nargs="+", default=[10, 20, 40])
    sp.add_argument("--samples", type=_positive, default=200)
    sp.add_argument("--grid", type=_positive, default=60)

    sp = add("verify", cmd_verify, "run the built-in consistency checks")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--full", action="store_true", help="use the full-size check budgets")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except InputError as exc:
        print(f"braidsig: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"braidsig: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
