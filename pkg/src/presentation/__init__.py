# Presentation Layer - nilprime command-line interface
