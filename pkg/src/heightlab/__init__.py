"""heightlab: exact coadjoint-orbit analysis and height-zeta experiments for
equivariant compactifications of unipotent groups over Q."""

__version__ = "0.1.0"
