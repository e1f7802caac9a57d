"""Character-graded equivariant K-theory for resolved compact abelian actions.

The package computes reduced (character-graded) equivariant K-theory and
delocalized equivariant cohomology from finite combinatorial input: an
isotropy tree of dual-group surjections, finite rational cochain models with
degree-two shift operators, integral K-data with shift automorphisms, and
face restriction/pullback maps.  All arithmetic is exact.
"""

__version__ = "0.1.0"
