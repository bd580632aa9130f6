#pragma once

#include "coverlab/errors.hpp"
#include "coverlab/natural.hpp"
#include "coverlab/residue_class.hpp"
#include "coverlab/arith.hpp"
#include "coverlab/covers.hpp"
#include "coverlab/mersenne.hpp"
#include "coverlab/lucas.hpp"
#include "coverlab/construct.hpp"
#include "coverlab/certify.hpp"
#include "coverlab/io.hpp"
#include "coverlab/report.hpp"
