# Analysis package for complexity functionals, spectral metrics and Jarnik sets
