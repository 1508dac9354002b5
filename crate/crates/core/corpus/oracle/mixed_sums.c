void f(int x, int y, int z) {
    x = x + y;
    y = y + z;
    z = x - y + z;
    x = z + 1;
}
