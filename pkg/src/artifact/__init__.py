"""Local solubility of twisted modular curves attached to elliptic curves over Q.

The library decides, for an elliptic curve E/Q and an odd prime p, whether
the quadratic twist of the modular curve of full level p attached to E
(the "minus" twist) has points over R and over every Q_ell, and classifies
curves that are everywhere locally soluble but globally pointless.
"""

__all__ = [
    "WeierstrassModel",
    "ReductionKind",
    "solve_local",
    "genus",
    "Place",
    "LocalVerdict",
    "analyze",
    "FinitePrime",
    "RealPlace",
    "compare_symplectic",
    "defect",
    "conductor",
    "hasse_cm",
    "frey_mazur_classify",
    "semistable_survey",
]

_EXPORTS = {
    "WeierstrassModel": ("weierstrass", "WeierstrassModel"),
    "ReductionKind": ("weierstrass", "ReductionKind"),
    "conductor": ("weierstrass", "conductor"),
    "solve_local": ("localsolver", "solve_local"),
    "genus": ("localsolver", "genus"),
    "Place": ("localsolver", "Place"),
    "FinitePrime": ("localsolver", "FinitePrime"),
    "RealPlace": ("localsolver", "RealPlace"),
    "LocalVerdict": ("localsolver", "LocalVerdict"),
    "compare_symplectic": ("localsolver", "compare_symplectic"),
    "defect": ("semistability", "defect"),
    "analyze": ("globalreport", "analyze"),
    "hasse_cm": ("globalreport", "hasse_cm"),
    "frey_mazur_classify": ("globalreport", "frey_mazur_classify"),
    "semistable_survey": ("globalreport", "semistable_survey"),
}


def __getattr__(name):
    if name in _EXPORTS:
        import importlib

        mod, attr = _EXPORTS[name]
        return getattr(importlib.import_module(f".{mod}", __name__), attr)
    raise AttributeError(name)
