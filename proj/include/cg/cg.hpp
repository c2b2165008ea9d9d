#pragma once

#include <cg/errors.hpp>
#include <cg/graph.hpp>
#include <cg/io.hpp>
#include <cg/methods.hpp>
#include <cg/mimap.hpp>
#include <cg/random.hpp>
#include <cg/separation.hpp>
#include <cg/transform.hpp>
