from src.sim.simulator import Simulator, simulate
from src.sim.equiv import Verdict, check_equivalence
from src.sim.power import power_proxy

__all__ = ["Simulator", "simulate", "Verdict", "check_equivalence", "power_proxy"]
