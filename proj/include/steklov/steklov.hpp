#ifndef STEKLOV_STEKLOV_HPP
#define STEKLOV_STEKLOV_HPP

#include "steklov/error.hpp"
#include "steklov/rng.hpp"
#include "steklov/graph.hpp"
#include "steklov/laplacian.hpp"
#include "steklov/embedding.hpp"
#include "steklov/spectrum.hpp"
#include "steklov/refine.hpp"
#include "steklov/immersion.hpp"
#include "steklov/packing.hpp"
#include "steklov/resistance.hpp"
#include "steklov/harness/generators.hpp"
#include "steklov/harness/document.hpp"
#include "steklov/harness/sweep.hpp"

#endif  // STEKLOV_STEKLOV_HPP
