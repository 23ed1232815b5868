#pragma once

#include "error.hpp"
#include "words.hpp"
#include "machine.hpp"
#include "constructions.hpp"
#include "inverse_graphs.hpp"
#include "levels.hpp"
#include "boundary.hpp"
#include "cayley.hpp"
#include "io.hpp"
