"""Experiments, Monte Carlo validators and the command-line front end."""
