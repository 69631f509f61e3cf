# Application layer unit tests 