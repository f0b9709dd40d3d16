#pragma once

#include "tqp/classifier.hpp"
#include "tqp/coset.hpp"
#include "tqp/error.hpp"
#include "tqp/factor.hpp"
#include "tqp/generate.hpp"
#include "tqp/integer.hpp"
#include "tqp/io/instance_file.hpp"
#include "tqp/io/report.hpp"
#include "tqp/jordan.hpp"
#include "tqp/lattice.hpp"
#include "tqp/local.hpp"
#include "tqp/spectrum.hpp"
#include "tqp/symbols.hpp"
#include "tqp/verify.hpp"
