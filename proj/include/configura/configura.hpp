#pragma once

#include "configura/bits.hpp"
#include "configura/construct.hpp"
#include "configura/error.hpp"
#include "configura/extend.hpp"
#include "configura/gf.hpp"
#include "configura/io.hpp"
#include "configura/matrix.hpp"
#include "configura/numeric.hpp"
#include "configura/reference_data.hpp"
#include "configura/ruler.hpp"
#include "configura/spectrum.hpp"
