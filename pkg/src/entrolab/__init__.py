"""entrolab - algebraic entropy of endomorphisms of locally finite groups."""

__version__ = "0.1.0"
