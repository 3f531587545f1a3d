"""Exact constructions of simple ordered groups of rank one and their intervals.

Modules:

* ``supernat``  - generalized (supernatural) integers and the groups ``Z_n``
* ``intcone``   - finitely generated cones in the non-negative integers
* ``embed``     - multiplication maps, directed systems and grids
* ``ratcone``   - the rational block monoid ``M`` and its interval ``D``
* ``intervals`` - generator-sequence intervals and verdicts
* ``construct`` - extensions, chains and grid assemblies
* ``cli``       - the ``rankone`` command
"""

__version__ = "0.1.0"
