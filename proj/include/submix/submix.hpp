#pragma once

// Umbrella header: everything needed to analyse topological mixing for
// primitive substitutions on a two-letter alphabet.

#include "quadratic.hpp"      // exact arithmetic in Q(sqrt d)
#include "word.hpp"           // words, populations, 2x2 integer matrices
#include "substitution.hpp"   // parsing, primitivity, normalization, fixed point
#include "spectral.hpp"       // eigenvalues, eigenvectors, projections
#include "arith.hpp"          // gcd condition, tile lengths, Bezout pairs
#include "language.hpp"       // factor language, excess profile, connectors
#include "geometry.hpp"       // lattice path, strip, accordion, IVT search
#include "figure.hpp"         // SVG / CSV figure export
#include "mixing.hpp"         // verdicts, density scan, separation diagnostic
#include "report.hpp"         // JSON report assembly
