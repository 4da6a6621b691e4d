"""Groups acting on sets without satisfying laws: exact kernels and experiments.

Subpackages by topic:

- words: free-group word arithmetic and generic evaluation
- perm: permutations, stabilizer chains, uniform sampling, separation orders
- trees: rooted-tree automorphisms, wreath recursions, Haar sampling
- thompson: exact dyadic piecewise-linear homeomorphisms of [0, 1]
- separation: separating-action adapters and witness certificates
- montecarlo: probability estimates, bound checks and freeness experiments
- cli: the `lawless` command-line experiment runner
"""

__version__ = "0.1.0"
