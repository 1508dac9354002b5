int add(int a, int b) {
    int r;
    r = a + b;
    return r;
}

void main(int x, int y) {
    int s;
    int t;
    s = add(x, y);
    t = add(s, 1);
}
