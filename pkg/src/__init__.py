# nilprime - ergodic averages along primes on nilsystems
