#pragma once

#include "bargmann.hpp"
#include "displacement.hpp"
#include "fock_vector.hpp"
#include "gauss_hermite.hpp"
#include "multi_index.hpp"
#include "operator_matrix.hpp"
#include "phase_point.hpp"
#include "phase_symbol.hpp"
#include "polynomial.hpp"
#include "quantization.hpp"
#include "random.hpp"
#include "serialization.hpp"
#include "star_products.hpp"
