"""tessella command line."""
