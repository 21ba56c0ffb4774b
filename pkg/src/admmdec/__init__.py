"""ADMM-based LP and penalized decoding of LDPC codes.

Submodules:

- ``code_graph``: Tanner graphs, alist files, GF(2) helpers
- ``channels``: AWGN/BSC models, LLRs, codeword symmetry maps
- ``parity_polytope``: Euclidean projection onto the even-parity polytope
- ``admm``: the decoder core (LP relaxation and l1/l2 penalized variants)
- ``reweighted``: reweighted LP decoding rounds
- ``instanton``: high-SNR failure search (coordinate-wise and random refine)
- ``wer``: Monte-Carlo word-error-rate harness
- ``oracles``: brute-force references used by the test suite
- ``cli``: command-line entry points
"""

__version__ = "0.1.0"
