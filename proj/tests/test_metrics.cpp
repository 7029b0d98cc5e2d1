#include <catch2/catch_amalgamated.hpp>
#include "scbcs/scbcs.hpp"
TEST_CASE("placeholder") { CHECK(true); }
