# Core package for exact continued-fraction arithmetic
