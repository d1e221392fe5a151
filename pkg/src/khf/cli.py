"""Command-line front end.

By default every verb computes in-process through the shared handler
layer; with --server it becomes a thin HTTP client for a running
service instance, emitting the identical documents.

Exit codes: 0 success / all checks passed; 1 a verification or limit
certificate failed; 2 usage error (bad type, bad flag, resource guard).
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction

import click

from . import api
from .hodgefamily import NotInRegime, SingularParameter
from .invcomplex import BasisTooLarge
from .roots import UnsupportedType
from .weyl import GroupTooLarge

_USAGE_ERRORS = (UnsupportedType, BasisTooLarge, GroupTooLarge, ValueError)


def _emit(doc: dict) -> None:
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _run(fetch_local, fetch_remote, server):
    try:
        doc = fetch_remote(server) if server else fetch_local()
    except _USAGE_ERRORS as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    except (SingularParameter, NotInRegime) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    return doc


def _remote(server: str, path: str, params=None) -> dict:
    import httpx

    resp = httpx.get(f"{server.rstrip('/')}{path}", params=params or {},
                     timeout=600.0)
    if resp.status_code == 400:
        click.echo(f"error: {resp.json().get('detail')}", err=True)
        sys.exit(2)
    resp.raise_for_status()
    return resp.json()


server_option = click.option(
    "--server", default=None, metavar="URL",
    help="talk to a running service instead of computing in-process",
)


@click.group()
def main():
    """Exact computations for invariant forms, harmonic bases, and
    equivariant Schubert calculus at small rank."""


@main.command()
@click.argument("type_name")
@server_option
def roots(type_name, server):
    """Positive roots, rho-pairings, and basis weights."""
    _emit(_run(lambda: api.roots(type_name),
               lambda s: _remote(s, f"/v1/roots/{type_name}"), server))


@main.command()
@click.argument("type_name")
@server_option
def weyl(type_name, server):
    """Weyl group elements, reduced words, and Bruhat covers."""
    _emit(_run(lambda: api.weyl(type_name),
               lambda s: _remote(s, f"/v1/weyl/{type_name}"), server))


@main.command(name="complex")
@click.argument("type_name")
@server_option
def complex_cmd(type_name, server):
    """Dimension table and Betti numbers of the invariant complex."""
    _emit(_run(lambda: api.complex_summary(type_name),
               lambda s: _remote(s, f"/v1/complex/{type_name}"), server))


@main.command()
@click.argument("type_name")
@click.option("--w", "words", multiple=True, metavar="WORD",
              help="reduced word such as 121 (1-based); repeatable")
@server_option
def harmonic(type_name, words, server):
    """Harmonic-form coefficient lists, for all of W or chosen words."""
    parsed = [[int(ch) for ch in word] for word in words] or None

    def local():
        return api.harmonic(type_name, parsed)

    def remote(s):
        import httpx

        resp = httpx.post(
            f"{s.rstrip('/')}/v1/harmonic/{type_name}",
            json={"words": parsed},
            timeout=600.0,
        )
        resp.raise_for_status()
        return resp.json()

    _emit(_run(local, remote, server))


@main.command()
@click.argument("type_name")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]),
              default="json")
@server_option
def dmatrix(type_name, fmt, server):
    """The equivariant evaluation matrix, entries as u-monomials."""
    doc = _run(lambda: api.dmatrix(type_name),
               lambda s: _remote(s, f"/v1/dmatrix/{type_name}"), server)
    if fmt == "json":
        _emit(doc)
        return
    click.echo("w1,w,c,deg")
    for i, row in enumerate(doc["rows"]):
        for j, entry in enumerate(row):
            click.echo(f"{i},{j},{entry['c']},{entry['deg']}")


@main.command()
@click.argument("type_name")
@click.option("--at-zero", is_flag=True, default=False,
              help="specialize the deformation variable to zero")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]),
              default="json")
@server_option
def schubert(type_name, at_zero, fmt, server):
    """Structure constants of the equivariant Schubert basis."""
    doc = _run(
        lambda: api.schubert(type_name, at_zero=at_zero),
        lambda s: _remote(s, f"/v1/schubert/{type_name}",
                          {"at_zero": at_zero}),
        server,
    )
    if fmt == "json":
        _emit(doc)
        return
    if at_zero:
        click.echo("w1,w2,w,value")
        for t in doc["constants"]:
            click.echo(f"{t['w1']},{t['w2']},{t['w']},{t['value']}")
    else:
        click.echo("w1,w2,w,coeff,deg")
        for t in doc["constants"]:
            click.echo(
                f"{t['w1']},{t['w2']},{t['w']},"
                f"{t['coeff']['c']},{t['coeff']['deg']}"
            )


@main.command(name="hodge-limit")
@click.argument("type_name")
@click.option("--steps", default=8, show_default=True)
@click.option("--base", default="2", show_default=True,
              help="doubling ratio of the dominant sequence")
@click.option("--x", "x_values", multiple=True, metavar="I=V",
              help="override the starting value of one parameter")
@server_option
def hodge_limit(type_name, steps, base, x_values, server):
    """Certify the metric-deformation limits along a dominant sequence."""
    overrides = {}
    for item in x_values:
        try:
            idx, val = item.split("=", 1)
            overrides[int(idx) - 1] = Fraction(val)
        except (ValueError, ZeroDivisionError):
            click.echo(f"error: bad --x value {item!r}", err=True)
            sys.exit(2)

    def local():
        return api.hodge_limit(
            type_name, steps=steps, base_ratio=Fraction(base),
            x_overrides=overrides,
        )

    doc = _run(
        local,
        lambda s: _remote(s, f"/v1/hodge-limit/{type_name}",
                          {"steps": steps, "base": base}),
        server,
    )
    _emit(doc)
    if not doc.get("passed", False):
        sys.exit(1)


@main.command()
@click.argument("type_name")
@click.option("--suite", default="all", show_default=True,
              type=click.Choice(["complex", "harmonic", "dmatrix",
                                 "hodge", "all"]))
@server_option
def verify(type_name, suite, server):
    """Run a verification suite; exit 1 if any check fails."""
    doc = _run(
        lambda: api.verify(type_name, suite),
        lambda s: _remote(s, f"/v1/verify/{type_name}", {"suite": suite}),
        server,
    )
    _emit(doc)
    if not doc.get("overall", False):
        sys.exit(1)


if __name__ == "__main__":
    main()
