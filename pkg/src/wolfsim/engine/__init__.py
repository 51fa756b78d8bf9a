"""Propagation kernels: a compiled core with a pure-NumPy fallback.

Both kernels implement the same two-function contract:

    step_unitaries(h_static, h_drive, coeffs, dts) -> (m, d, d) complex
        one-step matrix exponentials exp(-i*(h_static + c*h_drive)*dt)

    accumulate(units, order, sample_steps) -> (len(sample_steps), d, d)
        cumulative products of the step unitaries taken in the given
        order, sampled at ascending step counts (0 -> identity)

The compiled kernel is optional; when its extension is missing the NumPy
kernel is used.  Selection happens through get_engine(): pass a name
explicitly, or let the WOLFSIM_ENGINE environment variable ('compiled',
'python', 'auto') decide.
"""

import os

from . import _pykernel

_ENGINES = {_pykernel.name: _pykernel}

try:
    from . import _cykernel

    _ENGINES[_cykernel.name] = _cykernel
except ImportError:
    _cykernel = None


def available_engines() -> tuple[str, ...]:
    """Names accepted by get_engine, sorted."""
    return tuple(sorted(_ENGINES))


def get_engine(name: str | None = "auto"):
    """Resolve an engine module by name.

    None or 'auto' consults WOLFSIM_ENGINE, then prefers the compiled
    kernel when it is built.
    """
    if name is None or name == "auto":
        name = os.environ.get("WOLFSIM_ENGINE", "auto")
    if name == "auto":
        name = "compiled" if "compiled" in _ENGINES else "python"
    try:
        return _ENGINES[name]
    except KeyError:
        raise ValueError(
            f"unknown engine {name!r}; available: {', '.join(available_engines())}"
        ) from None
