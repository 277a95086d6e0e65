from .ffield import GF, gf, FieldTower, tower, Divisor, prime_power
from .scalar import Scalar, ZERO, ONE, neg_inv_sqrt_q, cyclotomic

__all__ = ["GF", "gf", "FieldTower", "tower", "Divisor", "prime_power",
           "Scalar", "ZERO", "ONE", "neg_inv_sqrt_q", "cyclotomic"]
