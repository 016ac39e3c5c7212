#pragma once

#include "cantor/core/bitstring.hpp"
#include "cantor/core/cantor.hpp"
#include "cantor/core/dyadic.hpp"
#include "cantor/core/error.hpp"
#include "cantor/core/periodic.hpp"
#include "cantor/core/rational.hpp"

#include "cantor/measures/assignment.hpp"
#include "cantor/measures/constructors.hpp"
#include "cantor/measures/metric.hpp"
#include "cantor/measures/modulus.hpp"
#include "cantor/measures/oracle.hpp"

#include "cantor/atoms.hpp"

#include "cantor/transforms/constraints.hpp"
#include "cantor/transforms/functional.hpp"
#include "cantor/transforms/image.hpp"
#include "cantor/transforms/rationalize.hpp"
#include "cantor/transforms/repair.hpp"
#include "cantor/transforms/transport.hpp"

#include "cantor/mltests.hpp"
#include "cantor/settling.hpp"

#include "cantor/io/formats.hpp"
