"""Generalized cosine transforms, intersection bodies and sections of star bodies."""
