#pragma once

#include "su11/algebra.hpp"
#include "su11/convergence.hpp"
#include "su11/cs_model.hpp"
#include "su11/displacement.hpp"
#include "su11/error.hpp"
#include "su11/realizations.hpp"
#include "su11/special.hpp"
#include "su11/squeezed.hpp"
#include "su11/verify.hpp"
