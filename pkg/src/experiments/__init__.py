# Experiments package for slope construction, invariant suites and sweeps
