import math
import numbers

import numpy as np


def check_finite(value, name):
    if isinstance(value, numbers.Complex) and not isinstance(value, numbers.Real):
        ok = math.isfinite(value.real) and math.isfinite(value.imag)
    else:
        try:
            ok = bool(np.all(np.isfinite(value)))
        except TypeError:
            raise TypeError(f"{name} must be numeric, got {type(value).__name__}") from None
    if not ok:
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


def check_positive(value, name):
    value = float(check_finite(value, name))
    if value <= 0.0:
        raise ValueError(f"{name} must be > 0, got {value!r}")
    return value


def as_complex(value, name):
    """Coerce ``value`` to a finite Python complex."""
    try:
        c = complex(value)
    except (TypeError, ValueError):
        raise TypeError(f"{name} must be a complex number, got {value!r}") from None
    check_finite(c, name)
    return c


def as_real_array(x, name="x"):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")
    return arr
