#include <doctest.h>

TEST_SUITE("checkpoint") {

}  // TEST_SUITE
