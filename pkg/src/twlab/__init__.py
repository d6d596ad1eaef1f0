"""twlab: treewidth tooling, gadget reductions, and oracle-checked solvers
for coloring, constraint-satisfaction, and edge-orientation problems."""

__version__ = "0.1.0"
