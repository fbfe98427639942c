"""Command-line front end: ``persprune <command> ...``.

Exit codes: 0 on success, 1 when a requested check fails, 2 on unreadable
input files or inputs the operation cannot handle (for example support too
close to the grid edge for the requested shift).
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path

import click
import numpy as np

from . import ciproblems as ci
from .decomp import barcode, decompose, interval_support
from .distances import Interleaving, bottleneck_upset, d_E, d_EN_bracket, search_interleaving
from .erode import common_en_from_interleaving, erosion
from .errors import CapExceeded, ParseError, PersPruneError
from .fileio import parse_module, parse_pattern, serialize_module, serialize_pattern
from .oracles import en_membership_bruteforce
from .permod import hom_basis, shift_module
from .prune import pruning, pruning_pair
from .render import render_svg

DEFAULT_CAPS = {
    "interleave": 20000,
    "ci_n": 4,
    "ci_stars": 14,
    "brute_dim": 8,
    "brute_pts": 16,
    "family_n": 3,
}


class CheckFailed(click.ClickException):
    exit_code = 1


class BadInput(click.ClickException):
    exit_code = 2


def _parse_caps(text: str | None) -> dict:
    caps = dict(DEFAULT_CAPS)
    if not text:
        return caps
    for item in text.split(","):
        key, _, val = item.partition("=")
        key = key.strip()
        if key not in caps or not val.strip().isdigit():
            raise click.BadParameter(f"bad cap {item!r}; known caps: {', '.join(caps)}", param_hint="--caps")
        caps[key] = int(val)
    return caps


def _load(path: str):
    try:
        return parse_module(Path(path).read_text())
    except ParseError as exc:
        raise BadInput(f"{path}: {exc}") from None
    except PersPruneError as exc:
        raise BadInput(f"{path}: {type(exc).__name__}: {exc}") from None
    except OSError as exc:
        raise BadInput(str(exc)) from None


def _load_pattern(path: str) -> ci.CIProblem:
    try:
        P, Q = parse_pattern(Path(path).read_text())
    except ParseError as exc:
        raise BadInput(f"{path}: {exc}") from None
    except OSError as exc:
        raise BadInput(str(exc)) from None
    return ci.CIProblem(P, Q)


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)


def _json(obj, out: str | None = None):
    _emit(json.dumps(obj, indent=2, default=_jsonable) + "\n", out)


def _jsonable(v):
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    raise TypeError(type(v).__name__)


def _dims_table(M) -> dict:
    return {" ".join(map(str, x)): n for x, n in sorted(M.dims.items())}


class _Group(click.Group):
    """Turns library errors raised inside a command into exit code 2."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except PersPruneError as exc:
            raise BadInput(f"{type(exc).__name__}: {exc}") from None


@click.group(cls=_Group)
@click.option("--field", "field_", type=int, default=None, help="Field for exact CI solving (2 or 3).")
@click.option("--seed", type=int, default=0, show_default=True, help="Seed for randomized routines.")
@click.option("--caps", default=None, help="Comma-separated limits, e.g. interleave=20000,ci_n=4,ci_stars=14.")
@click.pass_context
def main(ctx, field_, seed, caps):
    """Erosions, prunings, decompositions and CI problems for grid persistence modules."""
    ctx.ensure_object(dict)
    ctx.obj.update(field=field_, seed=seed, caps=_parse_caps(caps))


@main.command()
@click.argument("module")
def validate(module):
    """Parse a module file and check commutativity."""
    M = _load(module)
    click.echo(f"ok: grid {M.grid.sizes}, field {M.p}, {len(M.dims)} points, supdim {M.supdim}")


@main.command()
@click.argument("source")
@click.argument("target")
@click.option("--shift", "eps", type=int, default=0, show_default=True)
def hom(source, target, eps):
    """Dimension of Hom(SOURCE, TARGET(shift))."""
    M, N = _load(source), _load(target)
    click.echo(len(hom_basis(M, shift_module(N, eps))))


@main.command()
@click.argument("module")
@click.option("--epsilon", "eps", type=int, required=True)
@click.option("--out", default=None)
def erode(module, eps, out):
    """Write Er_eps of a module."""
    M = _load(module)
    _emit(serialize_module(erosion(M, eps)), out)


@main.command("en-check")
@click.argument("member")
@click.argument("ambient")
@click.option("--epsilon", "eps", type=int, required=True)
@click.pass_context
def en_check(ctx, member, ambient, eps):
    """Decide MEMBER in EN_eps(AMBIENT) by exhaustive search (tiny GF(2)/GF(3) inputs)."""
    N, M = _load(member), _load(ambient)
    caps = ctx.obj["caps"]
    try:
        ok = en_membership_bruteforce(N, M, eps, caps=(caps["brute_dim"], caps["brute_pts"]))
    except CapExceeded as exc:
        raise CheckFailed(f"undecided: {exc}") from None
    click.echo("member" if ok else "not a member")
    if not ok:
        sys.exit(1)


@main.command("en-common")
@click.argument("first")
@click.argument("second")
@click.option("--epsilon", "eps", type=int, required=True)
@click.option("--out", default=None, help="Directory for the two member files.")
@click.pass_context
def en_common(ctx, first, second, eps, out):
    """Search an eps-interleaving and build the common erosion-neighbourhood member."""
    M, N = _load(first), _load(second)
    try:
        il = search_interleaving(M, N, eps, cap=ctx.obj["caps"]["interleave"], seed=ctx.obj["seed"])
    except CapExceeded as exc:
        raise CheckFailed(f"search inconclusive: {exc}") from None
    if il is None:
        raise CheckFailed(f"no {eps}-interleaving exists (exhaustive search)")
    cm = common_en_from_interleaving(M, N, il.phi, il.psi, eps)
    if out:
        d = Path(out)
        d.mkdir(parents=True, exist_ok=True)
        (d / "member_first.mod").write_text(serialize_module(cm.member_M))
        (d / "member_second.mod").write_text(serialize_module(cm.member_N))
    _json({"epsilon": eps, "summands": len(decompose(cm.member_M, seed=ctx.obj["seed"]).parts),
           "member_dims": _dims_table(cm.member_M), "isomorphism_verified": cm.iso.is_iso()})


@main.command()
@click.argument("module")
@click.option("--epsilon", "eps", type=int, required=True)
@click.option("--out", default=None, help="Write the pruned module here; stats go to stdout.")
@click.option("--stats/--no-stats", default=True)
@click.pass_context
def prune(ctx, module, eps, out, stats):
    """The eps-pruning (I/K)(-eps) and iteration statistics."""
    M = _load(module)
    pair = pruning_pair(M, eps)
    P = pruning(M, eps, pair)
    text = serialize_module(P)
    if out:
        Path(out).write_text(text)
    elif not stats:
        click.echo(text, nl=False)
    if stats:
        bc = barcode(P, seed=ctx.obj["seed"])
        _json({
            "epsilon": eps,
            "steps_I": pair.steps_I,
            "steps_K": pair.steps_K,
            "supdim": P.supdim,
            "barcode_multiplicities": bc.multiplicities(),
            "points": len(P.dims),
            "total_dim": int(sum(P.dims.values())),
        })


@main.command("decompose")
@click.argument("module")
@click.option("--out", default=None, help="Directory for one file per summand.")
@click.pass_context
def decompose_cmd(ctx, module, out):
    """Split into indecomposables and print a barcode table."""
    M = _load(module)
    dec = decompose(M, seed=ctx.obj["seed"])
    bc = barcode(M, seed=ctx.obj["seed"], decomposition=dec)
    if out:
        d = Path(out)
        d.mkdir(parents=True, exist_ok=True)
        for i, P in enumerate(dec.parts):
            (d / f"summand_{i}.mod").write_text(serialize_module(P))
    click.echo(f"{'class':>5}  {'mult':>4}  {'points':>6}  {'supdim':>6}  {'interval':>8}")
    for k, (rep, mult) in enumerate(bc.entries):
        kind = "yes" if interval_support(rep) is not None else "no"
        click.echo(f"{k:>5}  {mult:>4}  {len(rep.dims):>6}  {rep.supdim:>6}  {kind:>8}")


# -- CI problems ----------------------------------------------------------------

@main.group("ci")
def ci_group():
    """Constrained-invertibility problems."""


def _print_matrix(name, A):
    click.echo(f"{name}:")
    for row in np.asarray(A):
        click.echo("  " + " ".join(str(int(v)) for v in row))


@ci_group.command("solve")
@click.argument("pattern")
@click.pass_context
def ci_solve(ctx, pattern):
    """Exact search for a solution over GF(2) (or GF(3) with --field 3)."""
    prob = _load_pattern(pattern)
    caps = ctx.obj["caps"]
    p = ctx.obj["field"] or 2
    try:
        sol = ci.solve(prob, p, max_n=caps["ci_n"], max_stars=caps["ci_stars"])
    except (CapExceeded, ValueError) as exc:
        raise CheckFailed(str(exc)) from None
    if sol is None:
        click.echo(f"no solution over GF({p})")
        return
    _print_matrix("A", sol.A)
    _print_matrix("B", sol.B)
    click.echo(f"simple: {ci.verify_solution(prob, sol)[1]}")


@ci_group.command("weaken")
@click.argument("pattern")
@click.option("-c", "c", type=int, required=True)
@click.option("--out", default=None)
def ci_weaken(pattern, c, out):
    """The c-weakening (c odd)."""
    prob = _load_pattern(pattern)
    try:
        w = ci.weaken(prob, c)
    except ValueError as exc:
        raise click.BadParameter(str(exc), param_hint="-c") from None
    _emit(serialize_pattern(w.P, w.Q), out)


@ci_group.command("match")
@click.argument("pattern")
@click.option("-c", "c", type=int, default=None, help="Weaken first.")
def ci_match(pattern, c):
    """A simple solution (permutation), if any."""
    prob = _load_pattern(pattern)
    if c is not None:
        prob = ci.weaken(prob, c)
    sigma = ci.simple_solution(prob)
    click.echo("none" if sigma is None else " ".join(f"u{i + 1}-v{j + 1}" for i, j in enumerate(sigma)))


@ci_group.command("to-upsets")
@click.argument("pattern")
@click.option("-C", "C", type=int, default=9, show_default=True)
@click.option("--out", required=True, help="Directory for first.mod and second.mod.")
def ci_to_upsets(pattern, C, out):
    """Upset modules whose containment patterns are the weakenings of PATTERN."""
    prob = _load_pattern(pattern)
    fam = ci.upsets_from_ci(prob, C)
    M, N = fam.modules(p=2)
    d = Path(out)
    d.mkdir(parents=True, exist_ok=True)
    (d / "first.mod").write_text(serialize_module(M, [f"upsets u_i from a size-{prob.n} CI pattern, C = {C}"]))
    (d / "second.mod").write_text(serialize_module(N, [f"upsets v_j from a size-{prob.n} CI pattern, C = {C}"]))
    if fam.degenerate:
        click.echo("warning: some vertex has no outgoing edge", err=True)
    for name, vecs in (("u", fam.w), ("v", fam.z)):
        for i, v in enumerate(vecs):
            click.echo(f"{name}{i + 1}: {' '.join(map(str, v))}")


@ci_group.command("from-upsets")
@click.argument("first")
@click.argument("second")
@click.option("--epsilon", "eps", type=int, required=True)
@click.option("--out", default=None)
def ci_from_upsets_cmd(first, second, eps, out):
    """The CI pattern of two upset-decomposable modules at shift eps."""
    from .distances import _upsets_of

    try:
        U, V = _upsets_of(_load(first)), _upsets_of(_load(second))
        prob = ci.ci_from_upsets(U, V, eps)
    except ValueError as exc:
        raise CheckFailed(str(exc)) from None
    _emit(serialize_pattern(prob.P, prob.Q), out)


@ci_group.command("counterexample")
@click.option("-n", "n", type=int, default=2, show_default=True)
@click.option("--out", default=None, help="Directory for the interleaved pair.")
@click.pass_context
def ci_counterexample(ctx, n, out):
    """Build the 1-interleaved pair from the shift endomorphism of the 2n-interval family."""
    from .erode import check_interleaving

    try:
        fam = ci.counterexample_family(n, max_n=ctx.obj["caps"]["family_n"])
    except CapExceeded as exc:
        raise CheckFailed(str(exc)) from None
    ok = check_interleaving(fam.A, fam.B, fam.phi, fam.psi, 1)
    if out:
        d = Path(out)
        d.mkdir(parents=True, exist_ok=True)
        (d / "first.mod").write_text(serialize_module(fam.A))
        (d / "second.mod").write_text(serialize_module(fam.B))
    _json({"n": n, "supdim_M": fam.M.supdim, "supdim_first": fam.A.supdim,
           "supdim_second": fam.B.supdim, "interleaving_verified": ok})
    if not ok:
        sys.exit(1)


# -- distances --------------------------------------------------------------

@main.command()
@click.argument("first")
@click.argument("second")
@click.option("--kind", type=click.Choice(["dE", "bottleneck-upset", "dEN-bracket"]), required=True)
@click.option("--search-upto", type=int, default=None,
              help="For dEN-bracket: search interleavings for eps = 0..K to bound d_I.")
@click.pass_context
def distance(ctx, first, second, kind, search_upto):
    """Erosion distance, upset bottleneck distance, or a d_EN bracket."""
    M, N = _load(first), _load(second)
    if kind == "dE":
        _json({"kind": kind, "value": d_E(M, N)})
        return
    if kind == "bottleneck-upset":
        try:
            val, match = bottleneck_upset(M, N)
        except (PersPruneError, ValueError) as exc:
            raise CheckFailed(str(exc)) from None
        _json({"kind": kind, "value": val, "matching": [[i, j] for i, j in match]})
        return
    known, lower, exhaustive = None, 0, True
    for eps in range(search_upto + 1 if search_upto is not None else 0):
        try:
            il = search_interleaving(M, N, eps, cap=ctx.obj["caps"]["interleave"], seed=ctx.obj["seed"])
        except CapExceeded:
            exhaustive = False
            continue
        if il is None:
            if exhaustive:
                lower = eps + 1
            continue
        known = Interleaving(eps, il.phi, il.psi, il.exhaustive)
        break
    br = d_EN_bracket(M, N, known=known, interleaving_lower=lower)
    _json({"kind": kind, "lower": br.lower, "upper": br.upper, "reasons": br.reasons,
           "interleaving_epsilon": known.eps if known else None})


@main.command()
@click.argument("module")
@click.option("--out", default=None)
@click.option("--cell", type=int, default=12, show_default=True)
@click.option("--title", default=None)
def render(module, out, cell, title):
    """SVG picture: dimension shading plus support outline."""
    M = _load(module)
    _emit(render_svg(M, cell=cell, title=title or Path(module).stem), out)


@main.command("verify-paper")
@click.option("--only", multiple=True, help="Run only these check keys, e.g. --only AC03.")
@click.option("--strict", is_flag=True, help="Count documented known gaps as failures too.")
def verify_paper(only, strict):
    """Run the acceptance checks and print one line per check.

    Checks marked as known gaps cannot hold for the construction as
    stated; they are still run and shown as FAIL, but only fail the
    command under --strict.
    """
    from .acceptance import run_all

    unexpected = gaps = 0
    for res in run_all(set(only) or None):
        click.echo(res.line())
        if not res.passed:
            if res.known_gap and not strict:
                gaps += 1
            else:
                unexpected += 1
    click.echo(f"summary: {unexpected} unexpected failure(s), {gaps} known gap(s)")
    if unexpected:
        raise CheckFailed(f"{unexpected} check(s) failed")


def run(argv=None) -> int:
    try:
        main.main(args=argv, standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except SystemExit as exc:
        return int(exc.code or 0)
    return 0


if __name__ == "__main__":
    sys.exit(run())
