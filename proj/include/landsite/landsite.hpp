#pragma once

#include <landsite/bench.hpp>
#include <landsite/core_types.hpp>
#include <landsite/errors.hpp>
#include <landsite/io.hpp>
#include <landsite/pipeline.hpp>
#include <landsite/pointclass.hpp>
#include <landsite/polylabel.hpp>
#include <landsite/polylidar.hpp>
#include <landsite/predicates.hpp>
#include <landsite/scenegen.hpp>
#include <landsite/serialize.hpp>
#include <landsite/triangulation.hpp>
