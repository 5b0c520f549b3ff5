"""End-to-end acceptance runs for the simulator and the fluid toolkit."""
