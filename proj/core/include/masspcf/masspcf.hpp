#pragma once

#include "masspcf/datagen.hpp"
#include "masspcf/dynamic.hpp"
#include "masspcf/error.hpp"
#include "masspcf/executor.hpp"
#include "masspcf/integrate.hpp"
#include "masspcf/matrix.hpp"
#include "masspcf/ndarray.hpp"
#include "masspcf/pcf.hpp"
#include "masspcf/reduce.hpp"
#include "masspcf/sweep.hpp"
