"""Command-line entry points: batch experiments, voice-file utilities, server."""

from __future__ import annotations

import functools
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

import click

from . import trials
from .errors import EvoforgeError
from .synth import (
    DEFAULT_SAMPLE_RATE,
    ParametricBackend,
    SUPPORTED_SAMPLE_RATES,
    SynthesisRequest,
    get_backend,
    synthesize,
)
from .session import DEFAULT_TEXT
from .voicefile import decode_voicefile
from .wav import encode_wav


def _api_errors(fn):
    """Exit nonzero with an ApiError-shaped JSON object on stderr."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except EvoforgeError as exc:
            click.echo(json.dumps(exc.as_dict()), err=True)
            sys.exit(2)
        except OSError as exc:
            click.echo(
                json.dumps({"code": "validation", "message": str(exc)}), err=True
            )
            sys.exit(2)

    return wrapper


@click.group()
def main():
    """Voice customization by preference-driven evolutionary search."""


def _echo_summary(summary: dict, err: bool = False) -> None:
    width = max(len(k) for k in summary)
    for key, value in summary.items():
        if isinstance(value, float):
            value = f"{value:.6g}"
        click.echo(f"{key.ljust(width)}  {value}", err=err)


@main.command("run-trials")
@click.option("--seeds", default=trials.CONVERGENCE_TRIALS, show_default=True, help="Number of trials (consecutive seeds).")
@click.option("--generations", default=trials.CONVERGENCE_GENERATIONS, show_default=True)
@click.option("--base-seed", default=trials.CONVERGENCE_BASE_SEED, show_default=True)
@click.option("--epsilon", default=0.2, show_default=True)
@click.option("--sigma-scale", default=0.3, show_default=True)
@click.option("--restart-scale", default=1.0, show_default=True)
@click.option("--noise", default=0.0, show_default=True, help="Judge flip probability.")
@click.option("--output", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="Write JSON-lines here instead of stdout.")
@_api_errors
def run_trials(seeds, generations, base_seed, epsilon, sigma_scale, restart_scale, noise, output):
    """Run simulated-judge trials; emit one TrialReport JSON line each."""
    reports = trials.run_convergence_experiment(
        n_trials=seeds,
        generations=generations,
        base_seed=base_seed,
        noise=noise,
        epsilon=epsilon,
        sigma_scale=sigma_scale,
        restart_scale=restart_scale,
    )
    lines = "\n".join(json.dumps(r.to_dict()) for r in reports) + "\n"
    if output is not None:
        output.write_text(lines)
        _echo_summary(trials.summarize(reports))
    else:
        click.echo(lines, nl=False)
        _echo_summary(trials.summarize(reports), err=True)


@main.command("export-report")
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False, path_type=Path), required=True,
              help="JSON-lines file produced by run-trials.")
@click.option("--output", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="Write the summary JSON here (stdout otherwise).")
@_api_errors
def export_report(input_path, output):
    """Aggregate a run-trials JSON-lines file into a summary report."""
    reports = []
    for line in input_path.read_text().splitlines():
        if not line.strip():
            continue
        doc = json.loads(line)
        doc.pop("ratio", None)
        reports.append(trials.TrialReport(**{
            k: tuple(v) if k == "distance_trajectory" else v for k, v in doc.items()
        }))
    summary = trials.summarize(reports)
    text = json.dumps(summary, indent=2) + "\n"
    if output is not None:
        output.write_text(text)
        _echo_summary(summary)
    else:
        click.echo(text, nl=False)


@main.group()
def voicefile():
    """Inspect or synthesize exported voice files."""


@voicefile.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@_api_errors
def inspect(path):
    """Print the decoded fields of a voice file as JSON."""
    vf = decode_voicefile(path.read_bytes())
    created = datetime.fromtimestamp(vf.created_at_ms / 1000, tz=timezone.utc)
    click.echo(
        json.dumps(
            {
                "magic": "EVVF",
                "version": vf.version,
                "k": int(vf.pca_coeffs.shape[0]),
                "generations": vf.generations,
                "rng_seed": vf.rng_seed,
                "created_at_ms": vf.created_at_ms,
                "created_at": created.isoformat(timespec="milliseconds"),
                "backend_hint": vf.backend_hint,
                "pca_coeffs": vf.pca_coeffs.tolist(),
                "embedding": vf.embedding.tolist(),
            },
            indent=2,
        )
    )


@voicefile.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--text", default=DEFAULT_TEXT, show_default=True)
@click.option("--sample-rate", default=DEFAULT_SAMPLE_RATE, type=int, show_default=True,
              help=f"One of {SUPPORTED_SAMPLE_RATES}.")
@click.option("--output", type=click.Path(dir_okay=False, path_type=Path), required=True)
@_api_errors
def synth(path, text, sample_rate, output):
    """Render a WAV from a voice file's embedding."""
    vf = decode_voicefile(path.read_bytes())
    try:
        backend = get_backend(vf.backend_hint)
    except EvoforgeError:
        click.echo(
            f"backend {vf.backend_hint!r} not registered; using {ParametricBackend.name}",
            err=True,
        )
        backend = get_backend(ParametricBackend.name)
    request = SynthesisRequest(embedding=vf.embedding, text=text, sample_rate=sample_rate)
    clip = synthesize(request, backend)
    output.write_bytes(encode_wav(clip))
    click.echo(f"wrote {output} ({clip.duration_ms} ms at {clip.sample_rate} Hz)", err=True)


@main.command()
@click.option("--host", default=None, help="Bind address (default EVOFORGE_HOST or 127.0.0.1).")
@click.option("--port", default=None, type=int, help="Port (default EVOFORGE_PORT or 8321).")
@click.option("--pca", "pca_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="PCA model JSON (default: fit the built-in corpus).")
@click.option("--store", "store_path", type=click.Path(dir_okay=False), default=None,
              help="Session database path (default: in-memory).")
@click.option("--text", default=None, help="Default synthesis sentence.")
@click.option("--cors-origin", default=None, help="Allowed CORS origin for the UI.")
@click.option("--prerender", is_flag=True, default=False, help="Render the next pair eagerly.")
@_api_errors
def serve(host, port, pca_path, store_path, text, cors_origin, prerender):
    """Run the HTTP service."""
    from .service import ServiceSettings, serve as run_server

    settings = ServiceSettings.from_env()
    if host is not None:
        settings.host = host
    if port is not None:
        settings.port = port
    if pca_path is not None:
        settings.pca_path = pca_path
    if store_path is not None:
        settings.store_path = store_path
    if text is not None:
        settings.default_text = text
    if cors_origin is not None:
        settings.cors_origin = cors_origin
    if prerender:
        settings.prerender = True
    run_server(settings)


if __name__ == "__main__":
    main()
