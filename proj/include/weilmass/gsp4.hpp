#pragma once

#include "weilmass/gsp4/enumeration.hpp"
#include "weilmass/gsp4/kernels.hpp"
#include "weilmass/gsp4/matrix.hpp"
#include "weilmass/gsp4/shape.hpp"
