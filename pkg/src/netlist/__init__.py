from src.netlist.model import Netlist, netlist_stats
from src.netlist.blif import parse, read_blif, write_blif
from src.netlist.hybridize import hybridize

__all__ = ["Netlist", "netlist_stats", "parse", "read_blif", "write_blif", "hybridize"]
