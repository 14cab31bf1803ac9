"""Command-line front end.

Exit codes: 0 pass, 1 verification failure, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import helmert_core, report
from .errors import HelmertStudentError, UsageError
from .sampling import NormalParams
from .theorem_verifier import CLAIM_IDS, VerificationConfig, run_all, run_negative_controls

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse already exits 2; keep the contract explicit
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


# ---------------------------------------------------------------------------
# matrix


def _parse_order(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise UsageError(f"order must be an integer, got {text!r}") from None


def cmd_matrix(args) -> int:
    n = helmert_core.check_order(_parse_order(args.n))
    if args.format == "text":
        if args.symbolic:
            table = helmert_core.symbolic_matrix(n)
            cells = [[str(table.entry(i, j)) for j in range(1, n + 1)] for i in range(1, n + 1)]
        else:
            cells = [[_fmt(x) for x in row] for row in helmert_core.build_dense(n)]
        width = max(len(c) for row in cells for c in row)
        for row in cells:
            print(" ".join(c.rjust(width) for c in row))
        return EXIT_PASS
    dense = helmert_core.build_dense(n)
    if args.format == "csv":
        for row in dense:
            print(",".join(_fmt(x) for x in row))
        return EXIT_PASS
    doc = report.document(["matrix"], {"n": n}, [{"n": n, "entries": dense}], True, 0.0)
    print(report.dumps(doc))
    return EXIT_PASS


# ---------------------------------------------------------------------------
# check-exact


def parse_orders(specs: list[str]) -> list[int]:
    """Parse ``5``, ``2..512`` style order specifications."""
    orders: list[int] = []
    for spec in specs:
        if ".." in spec:
            lo_s, hi_s = spec.split("..", 1)
            lo, hi = _parse_order(lo_s), _parse_order(hi_s)
            if hi < lo:
                raise UsageError(f"empty order range {spec!r}")
            orders.extend(range(lo, hi + 1))
        else:
            orders.append(_parse_order(spec))
    for n in orders:
        helmert_core.check_order(n)
    return orders


def cmd_check_exact(args) -> int:
    orders = parse_orders(args.orders)
    start = time.perf_counter()
    verdicts = helmert_core.certify_orders(orders)
    elapsed = (time.perf_counter() - start) * 1000.0
    ok = all(v.passed for v in verdicts)
    if args.format == "json":
        doc = report.document(
            ["check-exact"], {"orders": args.orders}, [v.to_dict() for v in verdicts], ok, elapsed
        )
        print(report.dumps(doc))
    else:
        for v in verdicts:
            if not v.passed:
                i, j = v.failing_pair
                print(
                    f"n={v.order}: FAIL at pair ({i}, {j}), case {v.failing_case}: "
                    f"integer sum {v.failing.integer_sum} != {v.expected_sum}"
                )
        passed = sum(v.passed for v in verdicts)
        print(f"exact certification: {passed}/{len(verdicts)} orders pass")
    return EXIT_PASS if ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# transform


def _read_vector(args) -> np.ndarray:
    if args.file is not None and args.values:
        raise UsageError("give the vector inline or with --file, not both")
    if args.file is not None:
        try:
            text = Path(args.file).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read {args.file}: {exc}") from None
        tokens = [line.strip() for line in text.splitlines() if line.strip()]
    else:
        tokens = args.values
    try:
        return np.array([float(t) for t in tokens], dtype=np.float64)
    except ValueError as exc:
        raise UsageError(f"bad number in input vector: {exc}") from None


def cmd_transform(args) -> int:
    n = helmert_core.check_order(_parse_order(args.n))
    z = _read_vector(args)
    if z.size != n:
        raise UsageError(f"expected {n} values, got {z.size}")
    y = helmert_core.apply(n, z)
    w = float(np.sum(y[:-1] ** 2))
    if args.format == "json":
        payload = {"y": y, "sqrt_n_mean": y[-1], "w": w}
        print(report.dumps(report.document(["transform"], {"n": n}, [payload], True, 0.0)))
    else:
        print("y = " + " ".join(_fmt(v) for v in y))
        print(f"sqrt(n)*mean = y_n = {_fmt(y[-1])}")
        print(f"W = sum_(i<n) y_i^2 = {_fmt(w)}")
    return EXIT_PASS


# ---------------------------------------------------------------------------
# verify


def _config(args) -> VerificationConfig:
    params = None
    if args.mu is not None or args.sigma is not None:
        mu = 0.0 if args.mu is None else args.mu
        sigma = 1.0 if args.sigma is None else args.sigma
        if not math.isfinite(mu) or not (math.isfinite(sigma) and sigma > 0):
            raise UsageError("--mu must be finite and --sigma finite and positive")
        params = NormalParams(mu, sigma)
    return VerificationConfig(
        n=args.n,
        trials=args.trials,
        seed=args.seed,
        alpha=args.alpha,
        bins=args.bins,
        params=params,
        workers=args.workers,
    )


def _claims(text: str | None) -> set[str] | None:
    if text is None:
        return None
    wanted = {c.strip() for c in text.split(",") if c.strip()}
    unknown = wanted - set(CLAIM_IDS)
    if unknown or not wanted:
        raise UsageError(f"--claims takes a subset of {','.join(CLAIM_IDS)}")
    return wanted


def _print_claims(results) -> None:
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        pv = " ".join(f"p[{k}]={v:.4g}" for k, v in r.p_values.items())
        bd = " ".join(
            f"|{k}|={abs(r.statistics[k]):.4g}<={b:.4g}" for k, b in r.bounds.items()
        )
        print(f"  {r.claim_id:<7}{status}  {r.verdict}  {pv} {bd}".rstrip())


def cmd_verify(args) -> int:
    cfg = _config(args)
    claims = _claims(args.claims)
    if args.negative_controls:
        start = time.perf_counter()
        outcomes = run_negative_controls(cfg)
        elapsed = (time.perf_counter() - start) * 1000.0
        ok = all(o.as_expected for o in outcomes)
        if args.format == "json":
            doc = report.document(
                ["verify", "--negative-controls"],
                cfg.to_dict(),
                [o.to_dict() for o in outcomes],
                ok,
                elapsed,
            )
            print(report.dumps(doc))
        else:
            for o in outcomes:
                tag = "ok" if o.as_expected else "UNEXPECTED"
                print(f"control {o.name} (target {o.target}): {tag}")
                _print_claims(o.results)
            print("negative controls:", "all failed as intended" if ok else "harness lacks power")
        return EXIT_PASS if ok else EXIT_FAIL

    rep = run_all(cfg, claims)
    if args.format == "json":
        results = [r.to_dict() for r in rep.results]
        results.append({"claim_id": "exact_orthogonality", **rep.certification.to_dict()})
        doc = report.document(["verify"], cfg.to_dict(), results, rep.overall_pass, rep.duration_ms)
        print(report.dumps(doc))
    else:
        c = cfg
        print(f"n={c.n} trials={c.trials} seed={c.seed} alpha={c.alpha} bins={c.bins}")
        _print_claims(rep.results)
        cert = "pass" if rep.certification.passed else "FAIL"
        print(f"  exact orthogonality of O_{c.n}: {cert}")
        print("overall:", "PASS" if rep.overall_pass else "FAIL")
    return EXIT_PASS if rep.overall_pass else EXIT_FAIL


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="helmert-student", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    m = sub.add_parser("matrix", help="print O_n")
    m.add_argument("n")
    m.add_argument("--format", choices=("text", "csv", "json"), default="text")
    m.add_argument("--symbolic", action="store_true", help="text entries as c/√r")
    m.set_defaults(func=cmd_matrix)

    c = sub.add_parser("check-exact", help="certify O_n O_n^T = I in integer arithmetic")
    c.add_argument("orders", nargs="+", help="orders such as 5 or 2..512")
    c.add_argument("--format", choices=("text", "json"), default="text")
    c.set_defaults(func=cmd_check_exact)

    t = sub.add_parser("transform", help="compute Y = O_n z")
    t.add_argument("n")
    t.add_argument("values", nargs="*")
    t.add_argument("--file", help="newline-delimited decimal values")
    t.add_argument("--format", choices=("text", "json"), default="text")
    t.set_defaults(func=cmd_transform)

    v = sub.add_parser("verify", help="Monte Carlo check of Student's theorem")
    v.add_argument("--n", type=int, default=5)
    v.add_argument("--trials", type=int, default=50_000)
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--alpha", type=float, default=0.001)
    v.add_argument("--bins", type=int, default=4)
    v.add_argument("--mu", type=float)
    v.add_argument("--sigma", type=float)
    v.add_argument("--claims", help=f"comma-separated subset of {','.join(CLAIM_IDS)}")
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.add_argument("--workers", type=int, default=1, help="parallelism cap; output unaffected")
    v.add_argument(
        "--negative-controls",
        action="store_true",
        help="run the falsification suite; exit 0 iff every control fails its target",
    )
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except HelmertStudentError as exc:
        print(f"helmert-student {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
