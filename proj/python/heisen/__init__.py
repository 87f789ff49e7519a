"""Nonlocal diffusion on the Heisenberg group.

Thin python facade over the compiled extension ``_heisen``: group
arithmetic, kernel construction, the spherical-transform roundtrip
diagnostic, and the packaged experiment driver.
"""

try:
    # installed layout: the extension lives inside the package
    from ._heisen import *  # noqa: F401,F403
    from ._heisen import __doc__ as _ext_doc  # noqa: F401
except ImportError:
    # build-tree layout: the extension sits on sys.path (e.g. the CMake
    # build directory)
    from _heisen import *  # noqa: F401,F403

__all__ = [
    "GroupPoint",
    "KernelSpec",
    "group_mul",
    "group_inverse",
    "dilate",
    "build_kernel",
    "rescaled_kernel",
    "experiment_names",
    "default_config",
    "run_experiment",
    "roundtrip_error",
]
