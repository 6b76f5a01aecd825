"""Command-line entry point: ``cayley-tdse {run,compare,converge}``."""

from __future__ import annotations

import sys
import warnings
from dataclasses import replace

from .banded import SingularSystemError
from .config import ConfigError, parse_config
from .harness import (
    _open_out,
    compare_schemes,
    convergence_study,
    run_scenario,
    write_comparison,
)
from .propagator import ObserverError, ResidualError

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL, EXIT_IO = 0, 1, 2, 3


def _summary_stream(out):
    # keep stdout clean when data goes there
    return sys.stderr if out in (None, "-") else sys.stdout


def _parse_dx_list(text):
    if not text:
        return None
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"invalid value for dx_list: {text!r}") from None


def _main(argv) -> int:
    command, config, settings = parse_config(argv)
    if command == "run":
        result = run_scenario(config)
        print(result.summary(), file=_summary_stream(config.out))
    elif command == "compare":
        comp = compare_schemes(config)
        with _open_out(config.out) as fh:
            write_comparison(comp, fh)
        stream = _summary_stream(config.out)
        print(comp.tri.summary(), file=stream)
        print(comp.penta.summary(), file=stream)
        print(f"max_error_ratio(tri/penta)={comp.ratio:.6g}", file=stream)
    elif command == "converge":
        dx_list = _parse_dx_list(settings.get("dx_list")) or [0.4, 0.2, 0.1]
        if "dt" not in settings.get("explicit", ()):
            config = replace(config, dt=min(dx_list) ** 2 / 10)
        results = convergence_study(config, dx_list)
        with _open_out(config.out) as fh:
            fh.write("scheme,dx,relative_error\n")
            for kind, res in results.items():
                for dx, err in zip(res.dx, res.errors):
                    fh.write(f"{kind.value},{dx:.17g},{err:.17g}\n")
        stream = _summary_stream(config.out)
        for kind, res in results.items():
            print(f"scheme={kind.value} order={res.order:.4f}", file=stream)
    return EXIT_OK


def main(argv=None) -> int:
    warnings.simplefilter("default")
    try:
        return _main(argv)
    except ConfigError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SingularSystemError, ResidualError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ObserverError as exc:
        if isinstance(exc.__cause__, OSError):
            print(f"I/O error: {exc}", file=sys.stderr)
            return EXIT_IO
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
