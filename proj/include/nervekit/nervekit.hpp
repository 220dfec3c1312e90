#pragma once

#include "nervekit/approximation.hpp"
#include "nervekit/commands.hpp"
#include "nervekit/cone_cylinder.hpp"
#include "nervekit/contraction.hpp"
#include "nervekit/cover.hpp"
#include "nervekit/error.hpp"
#include "nervekit/gluing.hpp"
#include "nervekit/homology.hpp"
#include "nervekit/io.hpp"
#include "nervekit/metric_space.hpp"
#include "nervekit/nerve.hpp"
#include "nervekit/pou.hpp"
#include "nervekit/random.hpp"
#include "nervekit/retraction.hpp"
#include "nervekit/samples.hpp"
#include "nervekit/simplicial_complex.hpp"
#include "nervekit/stability.hpp"
#include "nervekit/strainer.hpp"
