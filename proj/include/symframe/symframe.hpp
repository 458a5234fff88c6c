#pragma once

#include "symframe/error.hpp"
#include "symframe/exact_scalar.hpp"
#include "symframe/int_matrix.hpp"
#include "symframe/lattice.hpp"
#include "symframe/laurent.hpp"
#include "symframe/mask.hpp"
#include "symframe/verify.hpp"
#include "symframe/mask_builder.hpp"
#include "symframe/frame_builder.hpp"
#include "symframe/transform.hpp"
#include "symframe/io/serialize.hpp"
