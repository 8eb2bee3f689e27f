# Application layer unit tests
