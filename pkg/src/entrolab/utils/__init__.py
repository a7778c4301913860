"""Output formatting and literal codecs for entrolab."""
