from . import (
  special_functions,
  closed_form_spectra,
  discrete_laplacian,
  eigensolver,
  mean_census,
  heat_mass,
  monte_carlo,
)

__all__ = [
  "special_functions",
  "closed_form_spectra",
  "discrete_laplacian",
  "eigensolver",
  "mean_census",
  "heat_mass",
  "monte_carlo",
]
