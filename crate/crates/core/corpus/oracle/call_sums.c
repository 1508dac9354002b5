int add(int a, int b) {
    int r;
    r = a + b;
    return r;
}

void main(int x, int y) {
    int z;
    z = add(x, y);
    x = z + y;
    y = add(x, z);
    y = y + 1;
}
