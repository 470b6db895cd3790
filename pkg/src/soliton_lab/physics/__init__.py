"""Pure numerical building blocks: potential, lattice, seeds, charges, tracking."""
