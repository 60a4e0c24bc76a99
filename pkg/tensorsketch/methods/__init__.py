"""Named subspace estimation methods."""

from tensorsketch.core.exceptions import EstimatorError

from .base_method import BaseHosvdMethod
from .hosvd_methods import DirectSketchMethod, ExactMethod, ProductSketchMethod

# Registry of all available methods
METHOD_REGISTRY = {
    "exact": ExactMethod,
    "direct": DirectSketchMethod,
    "product": ProductSketchMethod,
}


def get_method_by_name(method_name: str) -> BaseHosvdMethod:
    """Instantiate a method by its name."""
    if method_name not in METHOD_REGISTRY:
        raise EstimatorError(f"Method '{method_name}' not found in registry")
    return METHOD_REGISTRY[method_name]()


def get_all_methods():
    """Get all available methods."""
    return METHOD_REGISTRY


def get_method_descriptions():
    """Get descriptions of all available methods."""
    descriptions = {}
    for name, method_class in METHOD_REGISTRY.items():
        method = method_class()
        descriptions[name] = {
            "name": name,
            "description": method.description,
            "parameters": method.parameters,
        }
    return descriptions
