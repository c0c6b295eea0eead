"""Green kernel of the process killed on [-1, 1]: shape and far field.

    python3 demos/green_kernel.py
"""

import numpy as np

from stablefi.green import far_field_ratio, green_unit, h
from stablefi.special import constants

if __name__ == "__main__":
    a, x = 1.5, 2.0
    print(f"alpha = {a}, x = {x}, h(x) = {h(a, x):.12f}")
    for y in np.geomspace(1.5, 1e8, 9):
        print(f"  G({x}, {y:10.3g}) = {green_unit(a, x, y):.8f}")
    print(f"far-field constant from the kernel: {far_field_ratio(a):.6f}")
    print(f"K_alpha:                            {constants(a).K_alpha:.6f}")
