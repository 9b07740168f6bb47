# Reporting package for CSV/JSON emission
