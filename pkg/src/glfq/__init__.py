"""glfq: a computational laboratory for GL_n over small finite fields.

Modules by responsibility:
  gf        field towers F_p < F_q < F_{q^n} < F_{q^2n}, characters
  kernels   batch matrix kernels (compiled core + pure-Python fallback)
  matgrp    conjugacy classes, parabolic, torus embedding
  classfun  class-function algebra, induction, Jacquet operators
  glchar    GL_2 table, Deligne-Lusztig characters, St_2/Sp_2 pipeline
  oracle    Dixon-Schneider brute-force character tables
  fourier   transforms of orbit indicators on M_n(F_q)
  cli       batch command driver
"""

__version__ = "0.1.0"

from .kernels import BACKEND  # noqa: F401
