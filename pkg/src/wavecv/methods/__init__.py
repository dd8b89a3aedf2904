"""Package containing all denoising methods"""

import importlib
import pkgutil
from pathlib import Path
from typing import Dict, Type

from .base import DenoisingMethod

discovered_methods: Dict[str, Type[DenoisingMethod]] = {}

for module_info in pkgutil.iter_modules([str(Path(__file__).parent)]):
    if module_info.ispkg or module_info.name == "base":
        continue
    module = importlib.import_module(f".{module_info.name}", package=__name__)

    for attribute_name in dir(module):
        attribute = getattr(module, attribute_name)
        if (
            isinstance(attribute, type)
            and issubclass(attribute, DenoisingMethod)
            and attribute is not DenoisingMethod
            and attribute.name
            and not attribute.name.startswith("_")
        ):
            if discovered_methods.get(attribute.name, attribute) is not attribute:
                raise ImportError(
                    f"Duplicate method name '{attribute.name}' found. Method names must be unique."
                )
            discovered_methods[attribute.name] = attribute

__all__ = ["DenoisingMethod", "discovered_methods"]
