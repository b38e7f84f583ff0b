"""vanderbound: certified stability bounds for monomial Vandermonde matrices.

The repository keeps the layout simple:
- `vanderbound/core/`: the numerical library (bases, geometry, construction, spectra)
- `vanderbound/certify/`: the runnable certification CLI (analyze / suite / oracle-check)
- `vanderbound/common/`: shared IO, logging, settings and run-state helpers
- `dataset/`: example node-set documents (data files, not Python packages)
"""

__version__ = "0.1.0"
