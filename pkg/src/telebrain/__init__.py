"""Telebrain: a telematic performance platform.

Stores multi-media performance instructions, distributes them in real time to
role-typed performers inside instantiated venues, and keeps execution
clock-synchronized across devices. Ships with a performer-programming
instruction kit and a virtual-performer simulator.
"""

__version__ = "0.1.0"
