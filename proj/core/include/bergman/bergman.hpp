#pragma once

#include "bergman/algebra.hpp"
#include "bergman/coherent.hpp"
#include "bergman/errors.hpp"
#include "bergman/field.hpp"
#include "bergman/fock.hpp"
#include "bergman/group.hpp"
#include "bergman/laplacian.hpp"
#include "bergman/types.hpp"
