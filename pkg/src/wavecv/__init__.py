"""Wavelet denoising with cross-validated thresholds"""

from __future__ import annotations

import importlib.metadata
from typing import Any

from .exceptions import ConfigError
from .methods.base import DenoisingMethod

_METHODS: dict[str, type[DenoisingMethod]] = {}


def register_method(name: str, method_class: type[DenoisingMethod]) -> None:
    """Register a denoising method

    Args:
        name: Name used in configs and on the command line (e.g., 'ld_block')
        method_class: Method class to register
    """
    _METHODS[name] = method_class


def get_method(name: str, **options: Any) -> DenoisingMethod:
    """Instantiate a registered method by name

    Args:
        name: Registered method name
        **options: Passed to the method constructor (``rule``, ``search``)

    Raises:
        ConfigError: for an unknown name or an unsupported option
    """
    method_class = _METHODS.get(name.lower().strip())
    if method_class is None:
        known = ", ".join(available_methods())
        raise ConfigError(f"Unknown method '{name}'; expected one of {known}")
    return method_class(**options)


def available_methods() -> list[str]:
    return sorted(_METHODS)


try:
    __version__ = importlib.metadata.version("wavecv")
except importlib.metadata.PackageNotFoundError:
    __version__ = "0.0.0"

from . import methods  # noqa: E402

for method_name, method_class in methods.discovered_methods.items():
    register_method(method_name, method_class)
