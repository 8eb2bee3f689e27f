# Test package for nilprime
