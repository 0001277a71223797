"""Signature-scheme benchmark harness with a blockchain verification simulator.

The package is organised around five pieces:

- :mod:`chainsig.catalog`: the fixed table of signature scheme variants.
- :mod:`chainsig.providers`: pluggable backends that turn a catalog entry
  into usable keypair/sign/verify operations.
- :mod:`chainsig.bench`: wall-clock measurement of those operations.
- :mod:`chainsig.sim`: a discrete-event model that propagates measured
  verify latency into whole-block verification times.
- :mod:`chainsig.report`: CSV and SVG emission for both stages.

:mod:`chainsig.cli` wires the pieces into a command-line pipeline.
"""

__version__ = "0.1.0"
