"""Commutative algebra over prime fields, and a verification pipeline for a
smooth ACM curve of degree 19 and genus 12 in P^7 that is cut out by
quadrics scheme-theoretically but whose ideal needs two cubics."""

__version__ = "0.1.0"
