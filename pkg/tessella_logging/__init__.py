"""Report schemas and output writers for tessella."""
