"""Command-line client for the surrogate-modeling service.

Every subcommand builds a request model and dispatches it either to the
in-process handlers or, with ``--server``, to a running instance over
HTTP.  No numerics live here.

Exit codes: 0 success, 1 usage error, 2 numerical failure.
"""

from __future__ import annotations

import json
import sys

import click

from .complexity import format_bytes, report_for, worst_case_curve
from .errors import (
    CaseUnavailable,
    InvalidAxis,
    InvalidInput,
    MLoewnerError,
    PartitionError,
)
from .service import handlers
from .service import schemas as s

_USAGE_ERRORS = (InvalidInput, InvalidAxis, CaseUnavailable, PartitionError)


class _NotConverged(MLoewnerError):
    pass


def _remote(server: str, path: str, payload: dict) -> dict:
    import httpx

    resp = httpx.post(f"{server.rstrip('/')}{path}", json=payload, timeout=600.0)
    if resp.status_code == 400:
        raise InvalidInput(resp.json().get("detail", resp.text))
    if resp.status_code >= 400:
        raise MLoewnerError(resp.json().get("detail", resp.text))
    return resp.json()


def _call(ctx, path: str, handler, request, response_cls):
    server = ctx.obj.get("server")
    if server:
        data = _remote(server, path, request.model_dump(by_alias=True))
        return response_cls.model_validate(data)
    return handler(request)


def _parse_bounds(text: str | None):
    if text is None:
        return None
    out = []
    for piece in text.split(","):
        lo, _, hi = piece.partition(":")
        if not _:
            raise click.UsageError(f"bad bounds {piece!r}, expected lower:upper")
        out.append((float(lo), float(hi)))
    return out


def _parse_ints(text: str | None):
    if text is None:
        return None
    try:
        return [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise click.UsageError(f"bad integer list {text!r}") from exc


@click.group()
@click.option("--server", default=None, metavar="URL",
              help="Base URL of a running service; default is in-process.")
@click.pass_context
def cli(ctx, server):
    """Compress grid tensors into rational surrogate models."""
    ctx.ensure_object(dict)
    ctx.obj["server"] = server


@cli.command()
@click.option("--case", type=int, required=True, help="Catalog case id.")
@click.option("--bounds", default=None, metavar="L:U[,L:U...]")
@click.option("--grid", default=None, metavar="N[,N...]")
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.pass_context
def sample(ctx, case, bounds, grid, out):
    """Sample a catalog function onto a dense grid tensor file."""
    req = s.SampleRequest(case=case, bounds=_parse_bounds(bounds), grid=_parse_ints(grid))
    resp = _call(ctx, "/sample", handlers.sample, req, s.SampleResponse)
    with open(out, "w") as fh:
        fh.write(resp.tensor.to_tensor().to_json())
    click.echo(f"wrote {out}")


@cli.command()
@click.option("--case", type=int, default=None)
@click.option("--tensor", "tensor_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="Tensor JSON file instead of a catalog case.")
@click.option("--bounds", default=None, metavar="L:U[,L:U...]")
@click.option("--grid", default=None, metavar="N[,N...]")
@click.option("--method", type=click.Choice(["direct", "adaptive"]), default="direct")
@click.option("--tol-ord", type=float, default=None)
@click.option("--k", default=None, metavar="K[,K...]", help="Explicit support sizes.")
@click.option("--max-k", type=int, default=None)
@click.option("--tol", type=float, default=None, help="Adaptive mismatch tolerance.")
@click.option("--tol-k", type=float, default=-1.0)
@click.option("--null-method", type=click.Choice(["svd", "qr", "solve"]), default="svd")
@click.option("--max-iters", type=int, default=100)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--strict", is_flag=True, help="Exit 2 when the adaptive fit stalls.")
@click.pass_context
def fit(ctx, case, tensor_path, bounds, grid, method, tol_ord, k, max_k, tol,
        tol_k, null_method, max_iters, out, strict):
    """Fit a barycentric model and write it to a JSON file."""
    if (case is None) == (tensor_path is None):
        raise click.UsageError("provide exactly one of --case or --tensor")
    if method == "adaptive" and (tol_ord is not None or k is not None):
        raise click.UsageError("--tol-ord/--k conflict with --method adaptive")
    if method == "direct" and tol is not None:
        raise click.UsageError("--tol conflicts with --method direct")
    tensor = None
    if tensor_path is not None:
        from .grid import GridTensor

        with open(tensor_path) as fh:
            tensor = s.TensorPayload.from_tensor(GridTensor.from_json(fh.read()))
    req = s.FitRequest(
        case=case, tensor=tensor, bounds=_parse_bounds(bounds), grid=_parse_ints(grid),
        method=method, tol_ord=tol_ord, k=_parse_ints(k), max_k=max_k, tol=tol,
        tol_k=tol_k, null_method=null_method, max_iters=max_iters,
    )
    resp = _call(ctx, "/fit", handlers.fit, req, s.FitResponse)
    with open(out, "w") as fh:
        fh.write(resp.model.to_model().to_json())
    click.echo(f"k = {resp.k}")
    if resp.complexity is not None:
        click.echo(
            f"flops: recursive {resp.complexity.flops_recursive}, "
            f"full {resp.complexity.flops_full}"
        )
    click.echo(f"wrote {out}")
    if resp.status != "ok":
        click.echo(f"status: {resp.status}", err=True)
        if strict:
            raise _NotConverged(f"adaptive fit stopped on {resp.status}")


@cli.command("eval")
@click.option("--model", "model_path", type=click.Path(exists=True, dir_okay=False),
              required=True)
@click.option("--at", "points", multiple=True, required=True, metavar="X1,X2,...",
              help="Evaluation point; repeatable.")
@click.option("--form", type=click.Choice(["barycentric", "monomial", "kst"]),
              default="barycentric")
@click.pass_context
def eval_cmd(ctx, model_path, points, form):
    """Evaluate a fitted model at one or more points."""
    from .models import BarycentricModel

    with open(model_path) as fh:
        payload = s.ModelPayload.from_model(BarycentricModel.from_json(fh.read()))
    pts = [[float(x) for x in p.split(",")] for p in points]
    req = s.EvalRequest(model=payload, points=pts, form=form)
    resp = _call(ctx, "/eval", handlers.evaluate, req, s.EvalResponse)
    for value in resp.values:
        click.echo(repr(value))


@cli.command()
@click.option("--model", "model_path", type=click.Path(exists=True, dir_okay=False),
              required=True)
@click.option("--to", "target", type=click.Choice(["monomial", "kst", "graph"]),
              required=True)
@click.option("--part", type=click.Choice(["numerator", "denominator"]),
              default="denominator", help="Which part the graph describes.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--graph-out", type=click.Path(dir_okay=False), default=None)
@click.pass_context
def convert(ctx, model_path, target, part, out, graph_out):
    """Convert a barycentric model to another representation."""
    from .models import BarycentricModel

    with open(model_path) as fh:
        payload = s.ModelPayload.from_model(BarycentricModel.from_json(fh.read()))
    req = s.ConvertRequest(model=payload, to=target, part=part)
    resp = _call(ctx, "/convert", handlers.convert, req, s.ConvertResponse)
    if target == "graph":
        path = graph_out or out
        if path is None:
            click.echo(resp.graph)
        else:
            with open(path, "w") as fh:
                fh.write(resp.graph)
            click.echo(f"wrote {path}")
        return
    if target == "monomial":
        text = resp.monomial.to_model().to_json()
    else:
        text = resp.kst.model_dump_json(by_alias=True)
    if out is None:
        click.echo(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)
        click.echo(f"wrote {out}")


@cli.command()
@click.option("--cases", required=True, metavar="ID[,ID...]")
@click.option("--method", type=click.Choice(["direct", "adaptive"]), default="direct")
@click.option("--draws", type=int, default=500)
@click.option("--seed", type=int, default=0, envvar="MLOEWNER_SEED", show_envvar=True)
@click.option("--jobs", type=int, default=1)
@click.option("--report", type=click.Path(dir_okay=False), required=True)
@click.option("--full", is_flag=True, help="Write every swept configuration, not just the best.")
@click.option("--strict", is_flag=True, help="Exit 2 when any best row did not converge.")
@click.pass_context
def bench(ctx, cases, method, draws, seed, jobs, report, full, strict):
    """Sweep configurations over catalog cases and write a CSV report."""
    req = s.BenchRequest(cases=_parse_ints(cases), method=method, draws=draws,
                         seed=seed, jobs=jobs, full=full)
    resp = _call(ctx, "/bench", handlers.bench, req, s.BenchResponse)
    with open(report, "w") as fh:
        fh.write(resp.csv)
    for row in resp.reports:
        click.echo(
            f"case {row.case_id}: rmse={row.rmse:.3e} dim={row.model_scalars} "
            f"config[{row.config}] {row.status}"
        )
    click.echo(f"wrote {report}")
    if strict and any(row.status != "ok" for row in resp.reports):
        raise _NotConverged("some cases did not converge")


@cli.command()
@click.option("--k", "kvec", required=True, metavar="K[,K...]")
@click.option("--omega", type=int, default=50, help="Largest variable count for the worst-case curve.")
@click.option("--base", type=int, default=2, help="Per-variable support size for the worst-case curve.")
@click.option("--worst-case-csv", type=click.Path(dir_okay=False), default=None)
@click.pass_context
def complexity(ctx, kvec, omega, base, worst_case_csv):
    """Flop and storage accounting for a support-size vector."""
    req = s.ComplexityRequest(k=_parse_ints(kvec))
    resp = _call(ctx, "/complexity", handlers.complexity_report, req, s.ComplexityPayload)
    click.echo(f"k = {resp.k}")
    click.echo(f"flops: recursive {resp.flops_recursive}, full {resp.flops_full}")
    click.echo(
        f"largest matrix: recursive {resp.max_entries_recursive} entries"
        f" ({resp.human_recursive} at 16 B/entry),"
        f" full {resp.max_entries_full} entries ({resp.human_full})"
    )
    click.echo(
        f"at 8 B/entry: recursive {format_bytes(resp.bytes_recursive_real)},"
        f" full {format_bytes(resp.bytes_full_real)}"
    )
    if worst_case_csv:
        with open(worst_case_csv, "w") as fh:
            fh.write("omega,flops\n")
            for n, flops in worst_case_curve(base, range(1, omega + 1)):
                fh.write(f"{n},{flops}\n")
        click.echo(f"wrote {worst_case_csv}")


@cli.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8000)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    from .service import app

    uvicorn.run(app, host=host, port=port)


def dispatch(argv: list[str]) -> int:
    """Run the CLI on ``argv`` and map outcomes onto exit codes."""
    try:
        cli.main(args=list(argv), standalone_mode=False, obj={})
        return 0
    except click.ClickException as exc:
        exc.show(file=sys.stderr)
        if exc.ctx is not None:
            click.echo(exc.ctx.get_usage(), err=True)
        return 1
    except click.exceptions.Abort:
        return 1
    except _USAGE_ERRORS as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    except MLoewnerError as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        return 2


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
