#include <doctest.h>

TEST_SUITE("schedule") {

}  // TEST_SUITE
