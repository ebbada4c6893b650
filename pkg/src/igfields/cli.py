"""Command-line front end.

Four subcommands cover the pipeline: ``construct`` builds the quadratic
field with n prescribed split primes, ``deficiency`` evaluates the basic
inequality on its simulated tower, ``density`` computes exact group-side
and empirical prime-side densities, and ``asymptotics`` emits
convergence-ratio tables.

Every command is deterministic: identical inputs produce byte-identical
output (JSON keys sorted, floats with 17 significant digits).  Exit codes:
0 success, 1 assertion or bound violation, 2 usage error.  Relative
``--output`` paths resolve against $IGFIELDS_OUTPUT_DIR when set.
"""

from __future__ import annotations

import os
import sys

import click

from igfields import (
    asymptotics,
    bounds,
    density,
    quadfield,
    serialize,
    tower,
)
from igfields.errors import ConstructionError, FeasibilityError

_CONSTRUCT_COLUMNS = (
    "n", "rn", "P", "Q", "r", "d",
    "discriminant", "genus", "ramified", "gs_threshold",
)
_DEFAULT_SAMPLES = {
    "sn": (1000, 10000, 100000),
    "sprimen": (1000, 10000, 100000),
    "epsilon": (10, 30, 100),
}


def _emit(text: str, output: str | None) -> None:
    payload = text if text.endswith("\n") else text + "\n"
    if output is None:
        click.echo(payload, nl=False)
        return
    path = output
    base = os.environ.get("IGFIELDS_OUTPUT_DIR", "")
    if base and not os.path.isabs(path):
        path = os.path.join(base, path)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(payload)


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


def _print_seed_catalog(ctx, param, value) -> None:
    if not value or ctx.resilient_parsing:
        return
    lines = ["built-in groups (name, order):"]
    groups = density.catalog()
    for name in sorted(groups, key=lambda k: (groups[k].order, k)):
        lines.append(f"  {name} {groups[name].order}")
    lines.append("sequence fixtures (name, default samples):")
    for name in ("sn", "sprimen", "epsilon"):
        grid = ",".join(str(n) for n in _DEFAULT_SAMPLES[name])
        lines.append(f"  {name} {grid}")
    click.echo("\n".join(lines))
    ctx.exit(0)


@click.group()
@click.option(
    "--seed-catalog",
    is_flag=True,
    expose_value=False,
    is_eager=True,
    callback=_print_seed_catalog,
    help="List built-in groups and sequence fixtures, then exit.",
)
def main() -> None:
    """Invariants of infinite global fields at desk scale: quadratic
    constructions with prescribed split primes, tower deficiencies,
    Chebotarev-style densities, and asymptotic ratio reports."""


@main.command()
@click.option("--n", type=int, required=True, help="Number of split primes.")
@click.option(
    "--max", "max_n", type=int, default=200, show_default=True,
    help="Largest accepted n.",
)
@click.option(
    "--format", "fmt", type=click.Choice(["json", "csv"]), default="json",
    show_default=True,
)
@click.option("--output", type=str, default=None, help="Write here instead of stdout.")
def construct(n: int, max_n: int, fmt: str, output: str | None) -> None:
    """Build Q(√d) with the first n odd primes split and enough ramified
    primes to satisfy the infinite-tower criterion."""
    if not 1 <= n <= max_n:
        raise click.UsageError(f"--n must be in 1..{max_n}, got {n}")
    try:
        result = quadfield.construct_Kn(n)
    except ConstructionError as exc:
        _fail(str(exc))
    data = result.to_json_dict()
    if fmt == "json":
        text = serialize.canonical_json(data)
    else:
        row = [
            ";".join(str(x) for x in data[key])
            if isinstance(data[key], list) else data[key]
            for key in _CONSTRUCT_COLUMNS
        ]
        text = ",".join(_CONSTRUCT_COLUMNS) + "\n" + serialize.csv_line(row)
    _emit(text, output)
    sys.exit(0 if result.gs_satisfied else 1)


@main.command()
@click.option("--n", type=int, required=True, help="Number of split primes.")
@click.option(
    "--variant", type=click.Choice(["nf", "grh", "ff"]), default="nf",
    show_default=True,
)
@click.option(
    "--depth", type=int, default=6, show_default=True,
    help="Simulated tower depth (levels above the base).",
)
@click.option(
    "--splits", type=int, default=None,
    help="Track only the first k split primes (default: all n; 0 leaves "
    "the archimedean terms alone on the left side).",
)
@click.option(
    "--format", "fmt", type=click.Choice(["json", "csv"]), default="json",
    show_default=True,
)
@click.option("--output", type=str, default=None, help="Write here instead of stdout.")
def deficiency(
    n: int, variant: str, depth: int, splits: int | None,
    fmt: str, output: str | None,
) -> None:
    """Evaluate the basic inequality on the simulated tower over the
    n-split-prime field; exit 1 when the deficiency leaves [0, 1]."""
    if n < 1:
        raise click.UsageError(f"--n must be ≥ 1, got {n}")
    if depth < 1:
        raise click.UsageError("--depth must be ≥ 1 for a stabilized limit")
    k = n if splits is None else splits
    if not 0 <= k <= n:
        raise click.UsageError(f"--splits must be in 0..{n}, got {splits}")
    try:
        result = quadfield.construct_Kn(n)
        tw = tower.simulate_classfield_tower(result.field, result.P[:k], depth)
        v = tower.phi_limit(tw, policy="strict")
    except (ConstructionError, FeasibilityError) as exc:
        _fail(str(exc))
    try:
        report = bounds.basic_inequality(v, variant)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    if fmt == "json":
        text = serialize.canonical_json(report.to_json_dict())
    else:
        text = (
            "variant,n,lhs,deficiency,alpha\n"
            + serialize.csv_line(report.to_csv_row(n=n))
        )
    _emit(text, output)
    sys.exit(0 if 0.0 <= report.deficiency <= 1.0 else 1)


@main.command("density")
@click.option("--group", "group_name", default=None, help="Catalog group name.")
@click.option(
    "--subgroup", "subgroup_spec", default=None,
    help="Generators, ';'-separated: cycle notation or element labels.",
)
@click.option("--quad", "quad_d", type=int, default=None, help="Squarefree d of Q(√d).")
@click.option("--x", "x_bound", type=int, default=None, help="Prime bound.")
@click.option("--norton", "norton_spec", default=None, help="Progression as 'q,a'.")
@click.option(
    "--format", "fmt", type=click.Choice(["json", "csv"]), default="json",
    show_default=True,
)
@click.option("--output", type=str, default=None, help="Write here instead of stdout.")
def density_cmd(
    group_name: str | None, subgroup_spec: str | None, quad_d: int | None,
    x_bound: int | None, norton_spec: str | None, fmt: str,
    output: str | None,
) -> None:
    """Exact degree-one-place density for a catalog group and subgroup
    (--group/--subgroup), empirical split fraction in Q(√d) (--quad/--x),
    or reciprocal prime sums in a progression (--norton/--x)."""
    chosen = [
        name for name, flag in (
            ("--group", group_name), ("--quad", quad_d), ("--norton", norton_spec),
        ) if flag is not None
    ]
    if len(chosen) != 1:
        raise click.UsageError(
            "choose exactly one mode: --group, --quad, or --norton"
        )

    if group_name is not None:
        if subgroup_spec is None:
            raise click.UsageError("--group requires --subgroup")
        groups = density.catalog()
        if group_name not in groups:
            raise click.UsageError(
                f"unknown group {group_name!r}; see --seed-catalog"
            )
        G = groups[group_name]
        generators = [g for g in subgroup_spec.split(";") if g.strip()]
        if not generators:
            raise click.UsageError("--subgroup needs at least one generator")
        try:
            H = density.subgroup_generated(G, generators)
        except ValueError as exc:
            raise click.UsageError(str(exc))
        report = density.split_degree_one_density(G, H)
        data = report.to_json_dict()
        if fmt == "json":
            text = serialize.canonical_json(data)
        else:
            keys = ("value", "lower_bound", "upper_bound", "context")
            text = ",".join(keys) + "\n" + serialize.csv_line(
                [data[k] for k in keys]
            )
        _emit(text, output)
        sys.exit(0)

    if x_bound is None:
        raise click.UsageError(f"{chosen[0]} requires --x")

    if quad_d is not None:
        try:
            emp = density.empirical_split_density(quad_d, x_bound)
        except ValueError as exc:
            raise click.UsageError(str(exc))
        data = {
            "d": quad_d,
            "x": x_bound,
            "fraction": emp.fraction,
            "split_count": emp.split_count,
            "considered": emp.considered,
        }
        if fmt == "json":
            text = serialize.canonical_json(data)
        else:
            keys = ("d", "x", "fraction", "split_count", "considered")
            text = ",".join(keys) + "\n" + serialize.csv_line(
                [data[k] for k in keys]
            )
        _emit(text, output)
        sys.exit(0)

    parts = norton_spec.split(",")
    if len(parts) != 2:
        raise click.UsageError("--norton expects 'q,a'")
    try:
        q, a = int(parts[0]), int(parts[1])
    except ValueError:
        raise click.UsageError("--norton expects integers 'q,a'")
    try:
        if fmt == "csv":
            ladder = sorted(
                {10 ** k for k in range(3, 8) if 10 ** k <= x_bound} | {x_bound}
            )
            lines = ["x,partial_sum,deviation"]
            for x in ladder:
                point = density.norton_deviation(q, a, x)
                lines.append(
                    serialize.csv_line([x, point.partial_sum, point.deviation])
                )
            text = "\n".join(lines)
        else:
            point = density.norton_deviation(q, a, x_bound)
            text = serialize.canonical_json({
                "q": q, "a": a, "x": x_bound,
                "partial_sum": point.partial_sum,
                "deviation": point.deviation,
            })
    except ValueError as exc:
        raise click.UsageError(str(exc))
    _emit(text, output)
    sys.exit(0)


@main.command("asymptotics")
@click.option(
    "--name", type=click.Choice(["sn", "sprimen", "epsilon"]), required=True,
)
@click.option(
    "--samples", default=None,
    help="Comma-separated ascending n values (default per sequence).",
)
@click.option(
    "--variant", type=click.Choice(["nf", "grh"]), default="nf",
    show_default=True, help="Weights for the epsilon sequence.",
)
@click.option(
    "--format", "fmt", type=click.Choice(["csv", "json"]), default="csv",
    show_default=True,
)
@click.option("--output", type=str, default=None, help="Write here instead of stdout.")
def asymptotics_cmd(
    name: str, samples: str | None, variant: str, fmt: str,
    output: str | None,
) -> None:
    """Tabulate a sequence against its asymptotic law (CSV by default)."""
    if samples is None:
        points = list(_DEFAULT_SAMPLES[name])
    else:
        try:
            points = [int(t) for t in samples.split(",") if t.strip()]
        except ValueError:
            raise click.UsageError(f"bad --samples {samples!r}")
    try:
        report = asymptotics.ratio_report(name, points, variant=variant)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    except (ConstructionError, AssertionError) as exc:
        _fail(str(exc))
    if fmt == "csv":
        text = "\n".join(report.to_csv_lines())
    else:
        text = serialize.canonical_json(report.to_json_dict())
    _emit(text, output)
    sys.exit(0)


if __name__ == "__main__":
    main()
